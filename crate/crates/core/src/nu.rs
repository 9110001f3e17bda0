//! Parametric Nikiforov-Uvarov machinery.
//!
//! A second-order equation of the form
//!
//! ```text
//! F'' + (β₁ − β₂y) / (y(1 − β₃y)) F' − (ξ₁y² − ξ₂y + ξ₃) / [y(1 − β₃y)]² F = 0
//! ```
//!
//! is described by a [`NuProblem`]. [`derive`] produces the auxiliary
//! constants β₄…β₁₃, [`quantization_residual`] evaluates the algebraic
//! eigenvalue condition, and [`wavefunction_factors`] returns the exponents
//! and Jacobi indices of the polynomial solution.
//!
//! Two branches are carried:
//!
//! * [`Branch::Standard`]: the usual rule with +√β₈ throughout. It is also
//!   the correct rule for β₃ = 0 (the β₃ terms simply drop out), which is how
//!   the radial oscillator spectrum is recovered.
//! * [`Branch::Starred`]: the alternative rule with −√β₈ and the starred
//!   constants β*₁₀…β*₁₃, evaluated exactly as written, including the
//!   unstarred β₁₀ in the second Jacobi index.
//!
//! β₈ and β₉ are kept raw by [`derive`]; every square root is taken at the
//! point of use and a negative radicand is reported as [`Error::Branch`].

use serde::{Deserialize, Serialize};

use crate::specfun::{jacobi_poly, JacobiParams};
use crate::{Error, Result};

/// Coefficients (β₁, β₂, β₃, ξ₁, ξ₂, ξ₃) of the template equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NuProblem {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Standard,
    Starred,
}

/// β₁₀…β₁₃ for one branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorConstants {
    pub beta10: f64,
    pub beta11: f64,
    pub beta12: f64,
    pub beta13: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuDerived {
    pub beta4: f64,
    pub beta5: f64,
    pub beta6: f64,
    pub beta7: f64,
    pub beta8: f64,
    pub beta9: f64,
    /// `None` when β₈ or β₉ is negative.
    pub standard: Option<FactorConstants>,
    pub starred: Option<FactorConstants>,
}

impl NuDerived {
    fn roots(&self) -> Result<(f64, f64)> {
        checked_roots(self.beta8, self.beta9)
    }

    pub fn factor_constants(&self, branch: Branch) -> Result<FactorConstants> {
        let c = match branch {
            Branch::Standard => self.standard,
            Branch::Starred => self.starred,
        };
        c.ok_or_else(|| negative_radicand(self.beta8, self.beta9))
    }
}

fn negative_radicand(beta8: f64, beta9: f64) -> Error {
    Error::Branch(format!(
        "no real bound state: beta8 = {beta8}, beta9 = {beta9} (both must be >= 0)"
    ))
}

fn checked_roots(beta8: f64, beta9: f64) -> Result<(f64, f64)> {
    if beta8 >= 0.0 && beta9 >= 0.0 {
        Ok((beta8.sqrt(), beta9.sqrt()))
    } else {
        Err(negative_radicand(beta8, beta9))
    }
}

/// Auxiliary constants of the parametric method.
pub fn derive(p: &NuProblem) -> NuDerived {
    let beta4 = 0.5 * (1.0 - p.beta1);
    let beta5 = 0.5 * (p.beta2 - 2.0 * p.beta3);
    let beta6 = beta5 * beta5 + p.xi1;
    let beta7 = 2.0 * beta4 * beta5 - p.xi2;
    let beta8 = beta4 * beta4 + p.xi3;
    let beta9 = p.beta3 * (beta7 + p.beta3 * beta8) + beta6;

    let (standard, starred) = match checked_roots(beta8, beta9) {
        Ok((r8, r9)) => (
            Some(FactorConstants {
                beta10: p.beta1 + 2.0 * beta4 + 2.0 * r8,
                beta11: p.beta2 - 2.0 * beta5 + 2.0 * (r9 + p.beta3 * r8),
                beta12: beta4 + r8,
                beta13: beta5 - (r9 + p.beta3 * r8),
            }),
            Some(FactorConstants {
                beta10: p.beta1 + 2.0 * beta4 - 2.0 * r8,
                beta11: p.beta2 - 2.0 * beta5 - 2.0 * (r9 - p.beta3 * r8),
                beta12: beta4 - r8,
                beta13: beta5 - (r9 - p.beta3 * r8),
            }),
        ),
        Err(_) => (None, None),
    };

    NuDerived {
        beta4,
        beta5,
        beta6,
        beta7,
        beta8,
        beta9,
        standard,
        starred,
    }
}

/// Left-hand side of the quantization condition at polynomial degree `s`.
pub fn quantization_residual(d: &NuDerived, p: &NuProblem, s: u32, branch: Branch) -> Result<f64> {
    let (r8, r9) = d.roots()?;
    let s = f64::from(s);
    let b3 = p.beta3;
    let common = s * (s - 1.0) * b3 + d.beta7 + 2.0 * b3 * d.beta8;
    Ok(match branch {
        Branch::Standard => {
            p.beta2 * s - (2.0 * s + 1.0) * d.beta5
                + (2.0 * s + 1.0) * (r9 + b3 * r8)
                + common
                + 2.0 * (d.beta8 * d.beta9).sqrt()
        }
        Branch::Starred => {
            p.beta2 * s + (1.0 - 2.0 * s) * d.beta5 + (2.0 * s + 1.0) * (r9 - b3 * r8) + common
                - 2.0 * (d.beta8 * d.beta9).sqrt()
        }
    })
}

/// y ↦ constant + slope·y
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub constant: f64,
    pub slope: f64,
}

impl AffineMap {
    pub fn apply(&self, y: f64) -> f64 {
        self.constant + self.slope * y
    }
}

/// F(y) ∼ y^{e₁} (1 − β₃y)^{e₂} P_s^{(a,b)}(1 − 2β₃y)
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefunctionFactors {
    pub exponent_y: f64,
    pub exponent_one_minus: f64,
    pub jacobi: JacobiParams,
    pub argument: AffineMap,
    pub beta3: f64,
}

impl WavefunctionFactors {
    /// Un-normalized F(y). Fails if 1 − 2β₃y leaves [−1, 1].
    pub fn evaluate(&self, y: f64) -> Result<f64> {
        let poly = jacobi_poly(&self.jacobi, self.argument.apply(y))?;
        Ok(y.powf(self.exponent_y) * (1.0 - self.beta3 * y).powf(self.exponent_one_minus) * poly)
    }
}

/// Exponents, Jacobi indices and argument map of the polynomial solution.
///
/// The caller is responsible for `s` satisfying the quantization rule.
/// β₃ = 0 is rejected on both branches since the second exponent and
/// Jacobi index divide by β₃; that limit is a Laguerre-type solution and is
/// built separately (see [`crate::spectrum::radial_wavefunction`]).
pub fn wavefunction_factors(
    d: &NuDerived,
    p: &NuProblem,
    s: u32,
    branch: Branch,
) -> Result<WavefunctionFactors> {
    if p.beta3 == 0.0 {
        return Err(Error::Branch(
            "beta3 = 0: the Jacobi form degenerates, use the confluent (Laguerre) limit".into(),
        ));
    }
    let std = d.factor_constants(Branch::Standard)?;
    let c = d.factor_constants(branch)?;
    let b3 = p.beta3;
    // The starred second index keeps the unstarred β₁₀, as written.
    let jacobi = JacobiParams::new(s, c.beta10 - 1.0, c.beta11 / b3 - std.beta10 - 1.0)?;
    Ok(WavefunctionFactors {
        exponent_y: c.beta12,
        exponent_one_minus: -c.beta12 - c.beta13 / b3,
        jacobi,
        argument: AffineMap {
            constant: 1.0,
            slope: -2.0 * b3,
        },
        beta3: b3,
    })
}

/// Stopping rules for [`find_root`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// Absolute tolerance on the residual.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Number of bracket doublings before giving up.
    pub max_expansions: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 200,
            max_expansions: 60,
        }
    }
}

/// Root of `f` starting from the interval [lo, hi].
///
/// The interval is widened by doubling its half-width about the midpoint
/// until the signs differ, then narrowed with secant steps that fall back to
/// bisection whenever the secant point leaves the bracket.
pub fn find_root<F>(f: F, lo: f64, hi: f64, opts: RootOptions) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(lo < hi) {
        return Err(Error::Root(format!("empty initial interval [{lo}, {hi}]")));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    let mut expansions = 0;
    while fa.signum() == fb.signum() && fa != 0.0 && fb != 0.0 {
        if expansions == opts.max_expansions {
            return Err(Error::Root(format!(
                "no sign change found after widening to [{a}, {b}]"
            )));
        }
        let mid = 0.5 * (a + b);
        let half = b - a;
        a = mid - half;
        b = mid + half;
        fa = f(a)?;
        fb = f(b)?;
        expansions += 1;
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }

    for _ in 0..opts.max_iterations {
        let secant = b - fb * (b - a) / (fb - fa);
        let x = if secant > a.min(b) && secant < a.max(b) {
            secant
        } else {
            0.5 * (a + b)
        };
        let fx = f(x)?;
        if fx.abs() <= opts.tolerance {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if (b - a).abs() <= f64::EPSILON * x.abs().max(1.0) {
            return Ok(x);
        }
    }
    Err(Error::Root(format!(
        "no convergence within {} iterations, bracket [{a}, {b}]",
        opts.max_iterations
    )))
}

/// Value of the embedded unknown for which the quantization rule holds at
/// degree `s`, where `build` maps the unknown to a problem instance.
pub fn solve_quantization<B>(
    build: B,
    s: u32,
    branch: Branch,
    lo: f64,
    hi: f64,
    opts: RootOptions,
) -> Result<f64>
where
    B: Fn(f64) -> NuProblem,
{
    find_root(
        |x| {
            let p = build(x);
            quantization_residual(&derive(&p), &p, s, branch)
        },
        lo,
        hi,
        opts,
    )
}
