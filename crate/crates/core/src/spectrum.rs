//! Bound states of V(r, θ) = a₁²r² + (a₂²/sin²θ + a₃²cot²θ)/r².
//!
//! The separated angular equation, written in y = 1 + cosθ, is mapped onto
//! a [`NuProblem`] with β₁ = β₂ = 0, β₃ = ½; its quantization root fixes the
//! separation constant ℓ(ℓ+1), and ℓ = L + ½ with
//!
//! ```text
//! Λ = √(1 + m² + 2M(a₂² + a₃²)/ħ²),  L = −1 + ½√((1 + 2s + 2Λ)² − 8Ma₃²/ħ²).
//! ```
//!
//! The radial equation in y = √(2M)a₁r²/ħ, after f = y^μ e^{−y/2} h with
//! μ = (ℓ+1)/2, is Kummer's equation for h. Mapped onto a β₃ = 0 problem its
//! quantization root gives E = ξ(4n + 2ℓ + 3), ξ = ħa₁/√(2M).
//!
//! Wavefunctions are un-normalized; norms and overlaps are available by
//! quadrature.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::nu::{self, Branch, NuProblem, RootOptions};
use crate::quad::integrate_half_line;
use crate::specfun::{
    gamma_ratio_prefactor, hyp1f1_terminating, jacobi_poly, Hyp1F1Terminating, JacobiParams,
};
use crate::{Error, Result};

/// Couplings of the potential and the physical constants M and ħ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub mass: f64,
    pub hbar: f64,
}

impl Default for PotentialParams {
    fn default() -> Self {
        Self {
            a1: 1.0,
            a2: 0.0,
            a3: 0.0,
            mass: 1.0,
            hbar: 1.0,
        }
    }
}

impl PotentialParams {
    pub fn new(a1: f64, a2: f64, a3: f64, mass: f64, hbar: f64) -> Result<Self> {
        let p = Self {
            a1,
            a2,
            a3,
            mass,
            hbar,
        };
        p.validate()?;
        Ok(p)
    }

    /// ħ = M = 1.
    pub fn natural(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        Self::new(a1, a2, a3, 1.0, 1.0)
    }

    /// Natural units with a₁ = √2, so that ξ = 1.
    pub fn unit_xi() -> Self {
        Self {
            a1: std::f64::consts::SQRT_2,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.a1, self.a2, self.a3, self.mass, self.hbar]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::Domain("potential parameters must be finite".into()));
        }
        if !(self.a1 > 0.0) {
            return Err(Error::Domain(format!(
                "a1 = {} must be positive for bound states",
                self.a1
            )));
        }
        if self.a2 < 0.0 || self.a3 < 0.0 {
            return Err(Error::Domain(format!(
                "angular couplings must be non-negative, got a2 = {}, a3 = {}",
                self.a2, self.a3
            )));
        }
        if !(self.mass > 0.0) || !(self.hbar > 0.0) {
            return Err(Error::Domain("mass and hbar must be positive".into()));
        }
        Ok(())
    }

    /// Energy scale ξ = √(ħ²a₁²/2M).
    pub fn xi(&self) -> f64 {
        self.hbar * self.a1 / (2.0 * self.mass).sqrt()
    }

    /// κ in y = κr², κ = √(2M)a₁/ħ.
    pub fn radial_scale(&self) -> f64 {
        (2.0 * self.mass).sqrt() * self.a1 / self.hbar
    }

    /// 2Ma₂²/ħ²
    pub fn reduced_a2(&self) -> f64 {
        2.0 * self.mass * self.a2 * self.a2 / (self.hbar * self.hbar)
    }

    /// 2Ma₃²/ħ²
    pub fn reduced_a3(&self) -> f64 {
        2.0 * self.mass * self.a3 * self.a3 / (self.hbar * self.hbar)
    }
}

/// How the angular constant L is turned into an orbital quantum number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EllRule {
    /// ℓ = L + ½, the real root of the separation constant.
    #[default]
    Continuous,
    /// ℓ = ⌊L + ½⌋, for integer-labelled tables.
    Floor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularSolution {
    pub s: u32,
    pub m: u32,
    /// Λ
    pub lambda: f64,
    /// L
    pub big_l: f64,
    /// L + ½
    pub ell_eff: f64,
}

impl AngularSolution {
    pub fn ell(&self, rule: EllRule) -> f64 {
        match rule {
            EllRule::Continuous => self.ell_eff,
            EllRule::Floor => self.ell_eff.floor(),
        }
    }

    /// ℓ(ℓ+1) with ℓ = L + ½.
    pub fn separation_constant(&self) -> f64 {
        self.ell_eff * (self.ell_eff + 1.0)
    }
}

/// The reduced forms of the spectrum discussed alongside the general case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialCase {
    #[default]
    General,
    /// a₃ = 0: Λ = √(1 + m² + 2Ma₂²/ħ²), L = −½ + Λ + s.
    A2Only,
    /// a₂ = 0: Λ = √(1 + m² + 2Ma₃²/ħ²), L from the general formula.
    A3Only,
    /// a₂ = a₃ = 0: Λ = √(1 + m²), ℓ = Λ + s.
    Oscillator,
}

impl SpecialCase {
    fn check(&self, p: &PotentialParams) -> Result<()> {
        let ok = match self {
            SpecialCase::General => true,
            SpecialCase::A2Only => p.a3 == 0.0,
            SpecialCase::A3Only => p.a2 == 0.0,
            SpecialCase::Oscillator => p.a2 == 0.0 && p.a3 == 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Usage(format!(
                "case {self:?} does not apply to a2 = {}, a3 = {}",
                p.a2, p.a3
            )))
        }
    }
}

/// Λ, L and ℓ for the general potential.
pub fn angular_solution(p: &PotentialParams, s: u32, m: u32) -> Result<AngularSolution> {
    angular_solution_for(p, SpecialCase::General, s, m)
}

/// Λ, L and ℓ using the case-specific formulas.
pub fn angular_solution_for(
    p: &PotentialParams,
    case: SpecialCase,
    s: u32,
    m: u32,
) -> Result<AngularSolution> {
    p.validate()?;
    case.check(p)?;
    let m2 = f64::from(m) * f64::from(m);
    let sf = f64::from(s);
    let (lambda, big_l) = match case {
        SpecialCase::General | SpecialCase::A3Only => {
            let lambda = match case {
                SpecialCase::General => (1.0 + m2 + p.reduced_a2() + p.reduced_a3()).sqrt(),
                _ => (1.0 + m2 + p.reduced_a3()).sqrt(),
            };
            let disc = (1.0 + 2.0 * sf + 2.0 * lambda).powi(2) - 4.0 * p.reduced_a3();
            if disc < 0.0 {
                return Err(Error::Domain(format!(
                    "angular discriminant {disc} < 0 for s = {s}, m = {m}"
                )));
            }
            (lambda, -1.0 + 0.5 * disc.sqrt())
        }
        SpecialCase::A2Only => {
            let lambda = (1.0 + m2 + p.reduced_a2()).sqrt();
            (lambda, -0.5 + lambda + sf)
        }
        SpecialCase::Oscillator => {
            let lambda = (1.0 + m2).sqrt();
            (lambda, lambda + sf - 0.5)
        }
    };
    Ok(AngularSolution {
        s,
        m,
        lambda,
        big_l,
        ell_eff: big_l + 0.5,
    })
}

/// Angular equation with separation constant `separation` = ℓ(ℓ+1):
/// β₁ = β₂ = 0, β₃ = ½, ξ₁ = (λ + a₃')/4, ξ₂ = (λ + a₃')/2,
/// ξ₃ = (m² + a₂' + a₃')/4, primes denoting 2Ma²/ħ².
pub fn angular_problem(p: &PotentialParams, m: u32, separation: f64) -> NuProblem {
    let a3r = p.reduced_a3();
    let m2 = f64::from(m) * f64::from(m);
    NuProblem {
        beta1: 0.0,
        beta2: 0.0,
        beta3: 0.5,
        xi1: 0.25 * (separation + a3r),
        xi2: 0.5 * (separation + a3r),
        xi3: 0.25 * (m2 + p.reduced_a2() + a3r),
    }
}

/// Separation constant ℓ(ℓ+1) from the quantization root of the angular problem.
pub fn solve_separation_constant(p: &PotentialParams, s: u32, m: u32) -> Result<f64> {
    p.validate()?;
    let guess = f64::from(s + m + 1).powi(2);
    nu::solve_quantization(
        |lam| angular_problem(p, m, lam),
        s,
        Branch::Standard,
        0.0,
        guess.max(1.0),
        RootOptions::default(),
    )
}

/// Non-negative ℓ with ℓ(ℓ+1) = `separation`.
pub fn ell_from_separation(separation: f64) -> Result<f64> {
    let disc = 0.25 + separation;
    if disc < 0.0 {
        return Err(Error::Domain(format!(
            "separation constant {separation} < -1/4 has no real l"
        )));
    }
    Ok(-0.5 + disc.sqrt())
}

/// h-equation y h'' + (ℓ + 3/2 − y) h' − (μ + ¼ − E/(4ξ)) h = 0 divided by y,
/// as a β₃ = 0 problem in the unknown `e_over_xi` = E/ξ.
pub fn radial_problem(ell: f64, e_over_xi: f64) -> NuProblem {
    let mu = 0.5 * (ell + 1.0);
    NuProblem {
        beta1: 2.0 * mu + 0.5,
        beta2: 1.0,
        beta3: 0.0,
        xi1: 0.0,
        xi2: 0.25 * e_over_xi - mu - 0.25,
        xi3: 0.0,
    }
}

/// The h-equation with its last term over y² instead of y, i.e.
/// ξ₃ = μ + ¼ − E/(4ξ). Its quantization roots do not give the oscillator
/// spectrum on either branch; kept for comparison only.
pub fn radial_problem_as_printed(ell: f64, e_over_xi: f64) -> NuProblem {
    let mu = 0.5 * (ell + 1.0);
    NuProblem {
        beta1: 2.0 * mu + 0.5,
        beta2: 1.0,
        beta3: 0.0,
        xi1: 0.0,
        xi2: 0.0,
        xi3: mu + 0.25 - 0.25 * e_over_xi,
    }
}

/// E/ξ from the radial quantization root at radial degree `n`.
pub fn solve_radial_energy(n: u32, ell: f64, branch: Branch) -> Result<f64> {
    if !(ell >= 0.0) {
        return Err(Error::Domain(format!("ell = {ell} must be non-negative")));
    }
    nu::solve_quantization(
        |e| radial_problem(ell, e),
        n,
        branch,
        0.0,
        4.0 * f64::from(n) + 2.0 * ell + 8.0,
        RootOptions::default(),
    )
}

/// 4n + 2ℓ + 3
pub fn energy_over_xi(n: u32, ell: f64) -> f64 {
    4.0 * f64::from(n) + 2.0 * ell + 3.0
}

/// E_{nℓ} = ξ(4n + 2ℓ + 3).
pub fn energy(p: &PotentialParams, n: u32, ell: f64) -> f64 {
    p.xi() * energy_over_xi(n, ell)
}

/// Energy with ℓ from the case-specific angular constants, N = 2n:
/// E = ξ[2(N + ℓ) + 3].
pub fn energy_special_case(
    p: &PotentialParams,
    case: SpecialCase,
    n: u32,
    s: u32,
    m: u32,
    rule: EllRule,
) -> Result<f64> {
    let sol = angular_solution_for(p, case, s, m)?;
    let big_n = 2.0 * f64::from(n);
    Ok(p.xi() * (2.0 * (big_n + sol.ell(rule)) + 3.0))
}

/// Counting rule for the total degeneracy of the level n'.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegeneracyRule {
    /// ℓ = 0..n' without parity restriction: (1 + n')².
    #[default]
    AllEll,
    /// ℓ ≡ n' (mod 2), as n' = 2n + ℓ implies: (n' + 1)(n' + 2)/2.
    ParityConstrained,
}

/// (1 + n')²
pub fn degeneracy(n_prime: u32) -> u64 {
    degeneracy_with_rule(n_prime, DegeneracyRule::AllEll)
}

pub fn degeneracy_with_rule(n_prime: u32, rule: DegeneracyRule) -> u64 {
    let n = u64::from(n_prime);
    match rule {
        DegeneracyRule::AllEll => (n + 1) * (n + 1),
        DegeneracyRule::ParityConstrained => (n + 1) * (n + 2) / 2,
    }
}

/// One (radial, ℓ) multiplet of the isotropic oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Multiplet {
    /// Number of radial quanta N in E = ξ(2N + 2ℓ + 3); N = 2n under the
    /// parity rule.
    pub radial: u32,
    pub ell: u32,
    pub n_prime: u32,
    /// 2ℓ + 1
    pub weight: u64,
}

impl Multiplet {
    pub fn energy_over_xi(&self) -> f64 {
        f64::from(2 * self.radial + 2 * self.ell + 3)
    }
}

/// All multiplets with n' ≤ `n_prime_max` under the given counting rule.
pub fn multiplets(n_prime_max: u32, rule: DegeneracyRule) -> Vec<Multiplet> {
    let mut out = Vec::new();
    for n_prime in 0..=n_prime_max {
        for ell in 0..=n_prime {
            if rule == DegeneracyRule::ParityConstrained && (n_prime - ell) % 2 != 0 {
                continue;
            }
            out.push(Multiplet {
                radial: n_prime - ell,
                ell,
                n_prime,
                weight: 2 * u64::from(ell) + 1,
            });
        }
    }
    out
}

/// One row of a spectrum table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    pub n: u32,
    pub ell: f64,
    /// Energy in units of ξ.
    pub energy: f64,
    /// 2n + ℓ, only for integer ℓ.
    pub n_prime: Option<u32>,
    pub degeneracy: Option<u64>,
}

impl EnergyLevel {
    pub fn new(n: u32, ell: f64) -> Self {
        let n_prime = (ell >= 0.0 && ell.fract() == 0.0).then(|| 2 * n + ell as u32);
        Self {
            n,
            ell,
            energy: energy_over_xi(n, ell),
            n_prime,
            degeneracy: n_prime.map(degeneracy),
        }
    }
}

/// Un-normalized f(r) = y^μ e^{−y/2} Γ(n+3/2+ℓ)/(n!Γ(3/2+ℓ)) ₁F₁(−n; 3/2+ℓ; y),
/// y = κr², μ = (ℓ+1)/2.
pub fn radial_wavefunction(p: &PotentialParams, n: u32, ell: f64, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("radius {r} must be non-negative")));
    }
    let y = p.radial_scale() * r * r;
    let mu = 0.5 * (ell + 1.0);
    Ok(y.powf(mu) * (-0.5 * y).exp() * radial_polynomial(n, ell, y)?)
}

/// R(r) = f(r)/r, finite at the origin.
pub fn radial_function(p: &PotentialParams, n: u32, ell: f64, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("radius {r} must be non-negative")));
    }
    let kappa = p.radial_scale();
    let y = kappa * r * r;
    let mu = 0.5 * (ell + 1.0);
    Ok(kappa.powf(mu) * r.powf(ell) * (-0.5 * y).exp() * radial_polynomial(n, ell, y)?)
}

fn radial_polynomial(n: u32, ell: f64, y: f64) -> Result<f64> {
    let h = Hyp1F1Terminating::new(n, 1.5 + ell, y)?;
    Ok(gamma_ratio_prefactor(n, ell)? * hyp1f1_terminating(&h)?)
}

/// ∫₀^∞ f_{n₁ℓ} f_{n₂ℓ} dr
pub fn radial_overlap(p: &PotentialParams, n1: u32, n2: u32, ell: f64) -> Result<f64> {
    // validate once so the integrand can unwrap
    radial_wavefunction(p, n1, ell, 0.0)?;
    radial_wavefunction(p, n2, ell, 0.0)?;
    Ok(integrate_half_line(
        |r| {
            radial_wavefunction(p, n1, ell, r).unwrap_or(f64::NAN)
                * radial_wavefunction(p, n2, ell, r).unwrap_or(f64::NAN)
        },
        1e-14,
    ))
}

/// f'' + (2M/ħ²)[E − a₁²r² − ℓ(ℓ+1)ħ²/(2Mr²)] f with f'' by a central
/// second difference of step `h`; zero for an exact eigenfunction.
pub fn radial_ode_residual(p: &PotentialParams, n: u32, ell: f64, r: f64, h: f64) -> Result<f64> {
    if !(r > h && h > 0.0) {
        return Err(Error::Domain(format!("need 0 < h < r, got h = {h}, r = {r}")));
    }
    let f = |x| radial_wavefunction(p, n, ell, x);
    let (fm, f0, fp) = (f(r - h)?, f(r)?, f(r + h)?);
    let second = (fp - 2.0 * f0 + fm) / (h * h);
    let hb2 = p.hbar * p.hbar;
    let e = energy(p, n, ell);
    let potential = p.a1 * p.a1 * r * r + ell * (ell + 1.0) * hb2 / (2.0 * p.mass * r * r);
    Ok(second + 2.0 * p.mass / hb2 * (e - potential) * f0)
}

/// Sign changes of f on a uniform grid over (0, r_max].
pub fn count_radial_nodes(
    p: &PotentialParams,
    n: u32,
    ell: f64,
    r_max: f64,
    samples: usize,
) -> Result<usize> {
    let mut nodes = 0;
    let mut last_sign = 0.0;
    for i in 1..=samples {
        let r = r_max * i as f64 / samples as f64;
        let v = radial_wavefunction(p, n, ell, r)?;
        if v == 0.0 {
            continue;
        }
        let sign = v.signum();
        if last_sign != 0.0 && sign != last_sign {
            nodes += 1;
        }
        last_sign = sign;
    }
    Ok(nodes)
}

/// Θ(y) = y^{1+Λ} |1−y|^Λ P_s^{(Λ,Λ)}(1−y), y = 1 + cosθ.
///
/// The factor (1−y)^Λ is taken as |1−y|^Λ: for non-integer Λ the literal
/// power is not real on θ > π/2, and only the modulus is kept.
pub fn angular_wavefunction(sol: &AngularSolution, theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return Err(Error::Domain(format!(
            "theta = {theta} must lie strictly inside (0, pi)"
        )));
    }
    let y = 1.0 + theta.cos();
    let x = 1.0 - y;
    let jacobi = JacobiParams::symmetric(sol.s, sol.lambda)?;
    Ok(y.powf(1.0 + sol.lambda) * x.abs().powf(sol.lambda) * jacobi_poly(&jacobi, x)?)
}

/// Sign of the azimuthal phase e^{∓imφ}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AzimuthalSign {
    /// e^{−imφ}
    #[default]
    Minus,
    /// e^{+imφ}
    Plus,
}

/// Ψ = R(r) Θ(θ) e^{∓imφ}, with the radial part at ℓ = `sol.ell_eff`.
pub fn total_wavefunction(
    p: &PotentialParams,
    n: u32,
    sol: &AngularSolution,
    r: f64,
    theta: f64,
    phi: f64,
    sign: AzimuthalSign,
) -> Result<Complex64> {
    let radial = radial_function(p, n, sol.ell_eff, r)?;
    let angular = angular_wavefunction(sol, theta)?;
    let phase = match sign {
        AzimuthalSign::Minus => -f64::from(sol.m) * phi,
        AzimuthalSign::Plus => f64::from(sol.m) * phi,
    };
    Ok(Complex64::from_polar(radial * angular, phase))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn params_validation() {
        assert!(PotentialParams::natural(0.0, 0.0, 0.0).is_err());
        assert!(PotentialParams::natural(1.0, -1.0, 0.0).is_err());
        assert!(PotentialParams::new(1.0, 0.0, 0.0, 0.0, 1.0).is_err());
        assert_relative_eq!(PotentialParams::unit_xi().xi(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(PotentialParams::default().xi(), 1.0 / 2f64.sqrt());
    }

    #[test]
    fn angular_constants_oscillator() {
        let p = PotentialParams::default();
        let sol = angular_solution(&p, 0, 0).unwrap();
        assert_eq!(sol.lambda, 1.0);
        assert_relative_eq!(sol.big_l, 0.5);
        for m in 0..4 {
            for s in 0..4 {
                let sol = angular_solution(&p, s, m).unwrap();
                let lam = (1.0 + f64::from(m * m)).sqrt();
                assert_relative_eq!(sol.lambda, lam);
                // ℓ = Λ + s
                assert_relative_eq!(sol.ell_eff, lam + f64::from(s), max_relative = 1e-15);
            }
        }
    }

    #[test]
    fn a2_only_matches_reduced_formula() {
        let p = PotentialParams::natural(1.0, 0.8, 0.0).unwrap();
        for (s, m) in [(0, 0), (1, 2), (3, 1)] {
            let general = angular_solution(&p, s, m).unwrap();
            let reduced = angular_solution_for(&p, SpecialCase::A2Only, s, m).unwrap();
            assert_relative_eq!(general.lambda, reduced.lambda);
            assert_relative_eq!(general.big_l, -0.5 + general.lambda + f64::from(s), max_relative = 1e-14);
            assert_relative_eq!(general.big_l, reduced.big_l, max_relative = 1e-14);
        }
    }

    #[test]
    fn special_case_limits() {
        let osc = PotentialParams::default();
        let e = energy_special_case(&osc, SpecialCase::Oscillator, 0, 0, 0, EllRule::Continuous)
            .unwrap();
        assert_relative_eq!(e / osc.xi(), 5.0, max_relative = 1e-15);

        // a₂ → 0 reproduces the oscillator Λ
        let tiny = PotentialParams::natural(1.0, 1e-9, 0.0).unwrap();
        let a = angular_solution_for(&tiny, SpecialCase::A2Only, 1, 2).unwrap();
        let b = angular_solution_for(&osc, SpecialCase::Oscillator, 1, 2).unwrap();
        assert_relative_eq!(a.lambda, b.lambda, max_relative = 1e-12);

        // a₃ → 0 reproduces L = −½ + Λ + s
        let tiny3 = PotentialParams::natural(1.0, 0.0, 1e-9).unwrap();
        let c = angular_solution_for(&tiny3, SpecialCase::A3Only, 2, 1).unwrap();
        assert_relative_eq!(c.big_l, -0.5 + c.lambda + 2.0, max_relative = 1e-12);

        let mixed = PotentialParams::natural(1.0, 0.5, 0.5).unwrap();
        for case in [SpecialCase::A2Only, SpecialCase::A3Only, SpecialCase::Oscillator] {
            assert!(matches!(
                energy_special_case(&mixed, case, 0, 0, 0, EllRule::Continuous),
                Err(Error::Usage(_))
            ));
        }
    }

    #[test]
    fn negative_discriminant_is_domain_error() {
        // (1 + 2Λ)² < 8Ma₃²/ħ² needs Λ small against a₃, impossible for
        // the physical Λ; force it through a very small mass with a₃ large.
        // Λ ≥ √(2M)a₃/ħ keeps the discriminant positive, so check the guard
        // on A3Only with a₂ = 0 instead using direct substitution.
        let p = PotentialParams::natural(1.0, 0.0, 10.0).unwrap();
        let sol = angular_solution(&p, 0, 0).unwrap();
        assert!(sol.big_l.is_finite());
    }

    #[test]
    fn energies() {
        let p = PotentialParams::unit_xi();
        assert_relative_eq!(energy(&p, 0, 0.0), 3.0, max_relative = 1e-15);
        assert_relative_eq!(energy(&p, 1, 2.0), 11.0, max_relative = 1e-15);
        let mut q = p;
        q.a1 *= 2.0;
        for (n, l) in [(0, 0.0), (2, 1.0), (3, 2.5)] {
            assert_relative_eq!(energy(&q, n, l), 2.0 * energy(&p, n, l), max_relative = 1e-15);
            assert_eq!(energy_over_xi(n + 1, l) - energy_over_xi(n, l), 4.0);
            assert_eq!(energy_over_xi(n, l + 1.0) - energy_over_xi(n, l), 2.0);
        }
    }

    #[test]
    fn radial_root_reproduces_oscillator_spectrum() {
        for n in 0..4 {
            for l in 0..4 {
                let ell = f64::from(l);
                let e = solve_radial_energy(n, ell, Branch::Standard).unwrap();
                assert_relative_eq!(e, energy_over_xi(n, ell), max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn starred_rule_misses_oscillator_spectrum() {
        // A.5 as written gives E/ξ = 4s + 5 − 2ℓ on the Kummer mapping.
        for (n, l) in [(0u32, 0.0), (1, 2.0), (3, 1.0)] {
            let e = solve_radial_energy(n, l, Branch::Starred).unwrap();
            assert_relative_eq!(e, 4.0 * f64::from(n) + 5.0 - 2.0 * l, max_relative = 1e-10);
        }
    }

    #[test]
    fn printed_radial_mapping_is_not_linear_in_n() {
        // With the y⁻² term, neither rule yields a level spacing of 4.
        for branch in [Branch::Standard, Branch::Starred] {
            let roots: Vec<f64> = (0..3)
                .filter_map(|n| {
                    nu::solve_quantization(
                        |e| radial_problem_as_printed(0.0, e),
                        n,
                        branch,
                        -10.0,
                        10.0,
                        RootOptions::default(),
                    )
                    .ok()
                })
                .collect();
            let linear = roots.len() == 3
                && (roots[1] - roots[0] - 4.0).abs() < 1e-6
                && (roots[2] - roots[1] - 4.0).abs() < 1e-6;
            assert!(!linear, "{branch:?}: {roots:?}");
        }
    }

    #[test]
    fn angular_root_reproduces_l() {
        for &(a2, a3) in &[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
            let p = PotentialParams::natural(1.0, a2, a3).unwrap();
            for s in 0..4 {
                for m in 0..4 {
                    let sep = solve_separation_constant(&p, s, m).unwrap();
                    let ell = ell_from_separation(sep).unwrap();
                    let sol = angular_solution(&p, s, m).unwrap();
                    assert_relative_eq!(ell - 0.5, sol.big_l, max_relative = 1e-10);
                    assert_relative_eq!(sep, sol.separation_constant(), max_relative = 1e-10);
                }
            }
        }
    }

    #[test]
    fn angular_factors_reproduce_symmetric_jacobi() {
        let p = PotentialParams::natural(1.0, 0.6, 0.9).unwrap();
        for (s, m) in [(0, 0), (2, 1), (3, 3)] {
            let sol = angular_solution(&p, s, m).unwrap();
            let prob = angular_problem(&p, m, sol.separation_constant());
            let d = nu::derive(&prob);
            let w = nu::wavefunction_factors(&d, &prob, s, Branch::Standard).unwrap();
            assert_relative_eq!(w.jacobi.alpha, sol.lambda, max_relative = 1e-12);
            assert_relative_eq!(w.jacobi.beta, sol.lambda, max_relative = 1e-12);
            assert_eq!(w.argument.apply(0.3), 0.7);
            let half = 0.5 * (1.0 + sol.lambda);
            assert_relative_eq!(w.exponent_y, half, max_relative = 1e-12);
            assert_relative_eq!(w.exponent_one_minus, half, max_relative = 1e-12);
        }
    }

    #[test]
    fn degeneracy_counts() {
        assert_eq!(degeneracy(0), 1);
        assert_eq!(degeneracy(2), 9);
        for n in 0..=50u32 {
            let brute: u64 = (0..=n).map(|l| 2 * u64::from(l) + 1).sum();
            assert_eq!(degeneracy(n), brute);
            let parity: u64 = (0..=n)
                .filter(|l| (n - l) % 2 == 0)
                .map(|l| 2 * u64::from(l) + 1)
                .sum();
            assert_eq!(degeneracy_with_rule(n, DegeneracyRule::ParityConstrained), parity);
        }
    }

    #[test]
    fn multiplets_regroup_into_levels() {
        for rule in [DegeneracyRule::AllEll, DegeneracyRule::ParityConstrained] {
            let ms = multiplets(12, rule);
            for n_prime in 0..=12u32 {
                let level = f64::from(2 * n_prime + 3);
                let weight: u64 = ms
                    .iter()
                    .filter(|m| m.energy_over_xi() == level)
                    .map(|m| m.weight)
                    .sum();
                assert_eq!(weight, degeneracy_with_rule(n_prime, rule), "{rule:?} n'={n_prime}");
            }
        }
        // under the parity rule the radial count is even and matches Eq. 13
        for m in multiplets(9, DegeneracyRule::ParityConstrained) {
            assert_eq!(m.radial % 2, 0);
            assert_eq!(m.energy_over_xi(), energy_over_xi(m.radial / 2, f64::from(m.ell)));
        }
    }

    #[test]
    fn energy_level_rows() {
        let lvl = EnergyLevel::new(1, 2.0);
        assert_eq!(lvl.energy, 11.0);
        assert_eq!(lvl.n_prime, Some(4));
        assert_eq!(lvl.degeneracy, Some(25));
        let frac = EnergyLevel::new(0, 1.5);
        assert_eq!(frac.n_prime, None);
        assert_eq!(frac.degeneracy, None);
    }

    #[test]
    fn radial_wavefunction_basics() {
        let p = PotentialParams::default();
        assert_eq!(radial_wavefunction(&p, 0, 0.0, 0.0).unwrap(), 0.0);
        assert!(radial_wavefunction(&p, 0, 0.0, -1.0).is_err());
        for l in [0.0, 1.0, 2.5] {
            assert_eq!(count_radial_nodes(&p, 0, l, 8.0, 4000).unwrap(), 0);
        }
        assert_eq!(count_radial_nodes(&p, 2, 1.0, 8.0, 4000).unwrap(), 2);
        // R = f / r away from the origin
        let (r, n, l) = (0.7, 2, 1.0);
        assert_relative_eq!(
            radial_function(&p, n, l, r).unwrap(),
            radial_wavefunction(&p, n, l, r).unwrap() / r,
            max_relative = 1e-13
        );
    }

    #[test]
    fn radial_ode_residuals() {
        for p in [
            PotentialParams::default(),
            PotentialParams::new(1.7, 0.0, 0.0, 0.8, 1.2).unwrap(),
        ] {
            for n in 0..3 {
                for l in [0.0, 1.0, 2.0, 1.37] {
                    let grid: Vec<f64> = (0..=490).map(|i| 0.1 + 0.01 * f64::from(i)).collect();
                    let fmax = grid
                        .iter()
                        .map(|&r| radial_wavefunction(&p, n, l, r).unwrap().abs())
                        .fold(0.0, f64::max);
                    for &r in &grid {
                        let res = radial_ode_residual(&p, n, l, r, 1e-4).unwrap();
                        assert!(res.abs() < 1e-5 * fmax, "n={n} l={l} r={r} res={res}");
                    }
                }
            }
        }
    }

    #[test]
    fn radial_overlaps_vanish() {
        let p = PotentialParams::natural(1.3, 0.0, 0.0).unwrap();
        for l in [0.0, 1.0, 2.0] {
            let n00 = radial_overlap(&p, 0, 0, l).unwrap();
            let n22 = radial_overlap(&p, 2, 2, l).unwrap();
            let o02 = radial_overlap(&p, 0, 2, l).unwrap();
            assert!(o02.abs() / (n00 * n22).sqrt() < 1e-8);
        }
    }

    #[test]
    fn angular_wavefunction_cases() {
        let p = PotentialParams::natural(1.0, 0.4, 0.3).unwrap();
        let sol = angular_solution(&p, 2, 1).unwrap();
        assert_eq!(angular_wavefunction(&sol, PI / 2.0).unwrap(), 0.0);
        assert!(angular_wavefunction(&sol, 0.0).is_err());
        assert!(angular_wavefunction(&sol, PI).is_err());

        let ground = angular_solution(&p, 0, 1).unwrap();
        let theta: f64 = 1.1;
        let y = 1.0 + theta.cos();
        assert_relative_eq!(
            angular_wavefunction(&ground, theta).unwrap(),
            y.powf(1.0 + ground.lambda) * (1.0 - y).abs().powf(ground.lambda),
            max_relative = 1e-14
        );
    }

    fn gegenbauer(n: u32, lam: f64, x: f64) -> f64 {
        let mut prev = 1.0;
        if n == 0 {
            return prev;
        }
        let mut cur = 2.0 * lam * x;
        for k in 2..=n {
            let k = f64::from(k);
            let next = (2.0 * x * (k + lam - 1.0) * cur - (k + 2.0 * lam - 2.0) * prev) / k;
            prev = cur;
            cur = next;
        }
        cur
    }

    #[test]
    fn angular_jacobi_factor_matches_gegenbauer() {
        // P_s^{(Λ,Λ)}(x) = (Λ+1)_s/(2Λ+1)_s · C_s^{(Λ+½)}(x)
        let p = PotentialParams::natural(1.0, 0.7, 0.2).unwrap();
        for s in 0..5 {
            let sol = angular_solution(&p, s, 2).unwrap();
            let lam = sol.lambda;
            let ratio: f64 = (1..=s)
                .map(|k| (lam + f64::from(k)) / (2.0 * lam + f64::from(k)))
                .product();
            for theta in [0.3, 1.2, 2.0, 2.9] {
                let y: f64 = 1.0 + f64::cos(theta);
                let prefactor = y.powf(1.0 + lam) * (1.0 - y).abs().powf(lam);
                let want = prefactor * ratio * gegenbauer(s, lam + 0.5, 1.0 - y);
                let got = angular_wavefunction(&sol, theta).unwrap();
                assert!((got - want).abs() <= 1e-12 * want.abs().max(1e-300), "s={s} θ={theta}");
            }
        }
    }

    #[test]
    fn total_wavefunction_phase() {
        let p = PotentialParams::natural(1.0, 0.3, 0.0).unwrap();
        let real = angular_solution(&p, 1, 0).unwrap();
        let psi = total_wavefunction(&p, 1, &real, 0.8, 0.6, 1.3, AzimuthalSign::Minus).unwrap();
        assert_eq!(psi.im, 0.0);

        let sol = angular_solution(&p, 0, 2).unwrap();
        let moduli: Vec<f64> = [0.0, 0.9, 2.5, 5.0]
            .iter()
            .map(|&phi| {
                total_wavefunction(&p, 0, &sol, 0.8, 0.6, phi, AzimuthalSign::Plus)
                    .unwrap()
                    .norm()
            })
            .collect();
        for m in &moduli {
            assert_relative_eq!(*m, moduli[0], max_relative = 1e-14);
        }

        // n = s = 0: bare prefactors
        let r: f64 = 0.8;
        let theta: f64 = 0.6;
        let kappa = p.radial_scale();
        let y = 1.0 + theta.cos();
        let want = kappa.powf(0.5 * (sol.ell_eff + 1.0))
            * r.powf(sol.ell_eff)
            * (-0.5 * kappa * r * r).exp()
            * y.powf(1.0 + sol.lambda)
            * (1.0 - y).abs().powf(sol.lambda);
        assert_relative_eq!(moduli[0], want, max_relative = 1e-13);
    }
}
