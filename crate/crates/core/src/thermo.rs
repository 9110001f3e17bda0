//! Dimensionless thermal functions in ᾱ:
//!
//! ```text
//! F̄ = −ᾱ ln Z,  Ū = ᾱ² ∂ln Z,  S̄ = ln Z + ᾱ ∂ln Z,  C̄ = 2ᾱ ∂ln Z + ᾱ² ∂²ln Z
//! ```
//!
//! plus grid sweeps, a specific-heat continuity scan and the high-temperature
//! limits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::partition::{
    self, direct_moments, em_laurent, exact_moments, EnergyMoments, FormulaVariant, Method, Mode,
    PartitionSpec, DEFAULT_TAIL_TOLERANCE,
};
use crate::{Error, Result};

/// ln Z and its first two ᾱ-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LnZDerivatives {
    pub z: f64,
    pub d1: f64,
    pub d2: f64,
}

impl LnZDerivatives {
    /// From Boltzmann moments of c in Z = Σ w e^{−c/ᾱ}.
    pub fn from_moments(m: &EnergyMoments, alpha_bar: f64) -> Self {
        let a = alpha_bar;
        Self {
            z: m.z,
            d1: m.mean / (a * a),
            d2: m.variance / a.powi(4) - 2.0 * m.mean / a.powi(3),
        }
    }
}

/// Anything that can produce Z(ᾱ).
pub trait PartitionProvider: Sync {
    fn z(&self, alpha_bar: f64) -> Result<f64>;

    /// Exact derivatives of ln Z, when the provider has them.
    fn analytic(&self, _alpha_bar: f64) -> Option<Result<LnZDerivatives>> {
        None
    }

    fn method(&self) -> Method;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionModel {
    pub mode: Mode,
    pub method: Method,
    pub variant: FormulaVariant,
    pub em_order: usize,
    pub tail_tolerance: f64,
}

impl PartitionModel {
    pub fn new(mode: Mode, method: Method) -> Self {
        Self {
            mode,
            method,
            variant: FormulaVariant::Derived,
            em_order: 2,
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
        }
    }

    pub fn with_variant(mut self, variant: FormulaVariant) -> Self {
        self.variant = variant;
        self
    }

    fn spec(&self, alpha_bar: f64) -> PartitionSpec {
        PartitionSpec {
            mode: self.mode,
            alpha_bar,
            cutoff: None,
            em_order: self.em_order,
            variant: self.variant,
            tail_tolerance: self.tail_tolerance,
        }
    }
}

impl PartitionProvider for PartitionModel {
    fn z(&self, alpha_bar: f64) -> Result<f64> {
        Ok(partition::evaluate(&self.spec(alpha_bar), self.method)?.z)
    }

    fn analytic(&self, alpha_bar: f64) -> Option<Result<LnZDerivatives>> {
        let result = (|| {
            self.spec(alpha_bar).validate()?;
            match self.method {
                Method::Direct => {
                    let m = direct_moments(self.mode, alpha_bar, self.tail_tolerance)?;
                    Ok(LnZDerivatives::from_moments(&m, alpha_bar))
                }
                Method::ClosedFormExact => {
                    let m = exact_moments(self.mode, alpha_bar)?;
                    Ok(LnZDerivatives::from_moments(&m, alpha_bar))
                }
                Method::EulerMaclaurin => {
                    let l = em_laurent(self.mode, self.em_order, self.variant)?;
                    let dl = l.derivative();
                    let z = l.eval(alpha_bar);
                    let z1 = dl.eval(alpha_bar);
                    let z2 = dl.derivative().eval(alpha_bar);
                    let g = z1 / z;
                    Ok(LnZDerivatives {
                        z,
                        d1: g,
                        d2: z2 / z - g * g,
                    })
                }
            }
        })();
        Some(result)
    }

    fn method(&self) -> Method {
        self.method
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeScheme {
    /// Provider derivatives; falls back to central differences when absent.
    Analytic,
    /// Central differences on ln Z with step `rel_step`·ᾱ.
    CentralDifference { rel_step: f64 },
}

impl Default for DerivativeScheme {
    fn default() -> Self {
        DerivativeScheme::Analytic
    }
}

impl DerivativeScheme {
    pub const DEFAULT_REL_STEP: f64 = 1e-5;

    pub fn central() -> Self {
        DerivativeScheme::CentralDifference {
            rel_step: Self::DEFAULT_REL_STEP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let DerivativeScheme::CentralDifference { rel_step } = *self {
            if !(rel_step > 1e-8 && rel_step < 1e-2) {
                return Err(Error::Domain(format!(
                    "relative step {rel_step} outside (1e-8, 1e-2)"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoPoint {
    pub alpha_bar: f64,
    pub z: f64,
    pub f_bar: f64,
    pub u_bar: f64,
    pub s_bar: f64,
    pub c_bar: f64,
    pub method: Method,
}

impl ThermoPoint {
    pub fn from_derivatives(alpha_bar: f64, d: &LnZDerivatives, method: Method) -> Self {
        let a = alpha_bar;
        let ln_z = d.z.ln();
        Self {
            alpha_bar: a,
            z: d.z,
            f_bar: -a * ln_z,
            u_bar: a * a * d.d1,
            s_bar: ln_z + a * d.d1,
            c_bar: 2.0 * a * d.d1 + a * a * d.d2,
            method,
        }
    }
}

fn checked_ln(z: f64, alpha_bar: f64) -> Result<f64> {
    if z.is_finite() && z > 0.0 {
        Ok(z.ln())
    } else {
        Err(Error::Evaluation { alpha_bar, z })
    }
}

fn central_derivatives<P: PartitionProvider + ?Sized>(
    provider: &P,
    alpha_bar: f64,
    rel_step: f64,
) -> Result<LnZDerivatives> {
    let h = rel_step * alpha_bar;
    let z0 = provider.z(alpha_bar)?;
    let l0 = checked_ln(z0, alpha_bar)?;
    let lp = checked_ln(provider.z(alpha_bar + h)?, alpha_bar + h)?;
    let lm = checked_ln(provider.z(alpha_bar - h)?, alpha_bar - h)?;
    Ok(LnZDerivatives {
        z: z0,
        d1: (lp - lm) / (2.0 * h),
        d2: (lp - 2.0 * l0 + lm) / (h * h),
    })
}

/// The four thermal functions at one ᾱ from any provider.
pub fn thermo_point_with<P: PartitionProvider + ?Sized>(
    provider: &P,
    alpha_bar: f64,
    scheme: DerivativeScheme,
) -> Result<ThermoPoint> {
    if !(alpha_bar.is_finite() && alpha_bar > 0.0) {
        return Err(Error::Domain(format!(
            "alpha_bar = {alpha_bar} must be finite and positive"
        )));
    }
    scheme.validate()?;
    let d = match scheme {
        DerivativeScheme::Analytic => match provider.analytic(alpha_bar) {
            Some(d) => d?,
            None => central_derivatives(provider, alpha_bar, DerivativeScheme::DEFAULT_REL_STEP)?,
        },
        DerivativeScheme::CentralDifference { rel_step } => {
            central_derivatives(provider, alpha_bar, rel_step)?
        }
    };
    checked_ln(d.z, alpha_bar)?;
    Ok(ThermoPoint::from_derivatives(alpha_bar, &d, provider.method()))
}

pub fn thermo_point(
    alpha_bar: f64,
    model: &PartitionModel,
    scheme: DerivativeScheme,
) -> Result<ThermoPoint> {
    thermo_point_with(model, alpha_bar, scheme)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridSpec {
    Linear { min: f64, max: f64, points: usize },
    Log { min: f64, max: f64, points: usize },
    Explicit(Vec<f64>),
}

impl GridSpec {
    /// Grid values, strictly increasing and positive.
    pub fn values(&self) -> Result<Vec<f64>> {
        let values = match *self {
            GridSpec::Linear { min, max, points } | GridSpec::Log { min, max, points } => {
                if points == 0 {
                    return Err(Error::Domain("grid needs at least one point".into()));
                }
                if !(min.is_finite() && max.is_finite() && min > 0.0) {
                    return Err(Error::Domain(format!(
                        "grid bounds [{min}, {max}] must be finite and positive"
                    )));
                }
                if points == 1 {
                    vec![min]
                } else {
                    if !(max > min) {
                        return Err(Error::Domain(format!(
                            "grid maximum {max} must exceed minimum {min}"
                        )));
                    }
                    let last = (points - 1) as f64;
                    let log = matches!(self, GridSpec::Log { .. });
                    (0..points)
                        .map(|i| {
                            if i == points - 1 {
                                max
                            } else if log {
                                (min.ln() + (max.ln() - min.ln()) * i as f64 / last).exp()
                            } else {
                                min + (max - min) * i as f64 / last
                            }
                        })
                        .collect()
                }
            }
            GridSpec::Explicit(ref v) => v.clone(),
        };
        if values.is_empty() {
            return Err(Error::Domain("grid is empty".into()));
        }
        if values.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::Domain("grid values must be finite and positive".into()));
        }
        if values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("grid must be strictly increasing".into()));
        }
        Ok(values)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub grid: GridSpec,
    pub model: PartitionModel,
    pub scheme: DerivativeScheme,
}

/// Grid-level shape checks: strict at every consecutive pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotonicitySummary {
    pub f_decreasing: bool,
    pub u_increasing: bool,
    pub s_increasing: bool,
    pub c_nondecreasing: bool,
    pub c_max: f64,
}

impl MonotonicitySummary {
    /// `None` for fewer than two points.
    pub fn of(points: &[ThermoPoint]) -> Option<Self> {
        if points.len() < 2 {
            return None;
        }
        let pairs = || points.windows(2);
        Some(Self {
            f_decreasing: pairs().all(|w| w[1].f_bar < w[0].f_bar),
            u_increasing: pairs().all(|w| w[1].u_bar > w[0].u_bar),
            s_increasing: pairs().all(|w| w[1].s_bar > w[0].s_bar),
            c_nondecreasing: pairs().all(|w| w[1].c_bar >= w[0].c_bar),
            c_max: points.iter().map(|p| p.c_bar).fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub points: Vec<ThermoPoint>,
    pub summary: Option<MonotonicitySummary>,
}

pub fn sweep(spec: &SweepSpec) -> Result<SweepResult> {
    sweep_with(&spec.model, &spec.grid, spec.scheme)
}

/// Evaluates every grid point in parallel; results keep grid order and the
/// first failing index aborts the sweep.
pub fn sweep_with<P: PartitionProvider + ?Sized>(
    provider: &P,
    grid: &GridSpec,
    scheme: DerivativeScheme,
) -> Result<SweepResult> {
    scheme.validate()?;
    let alphas = grid.values()?;
    let results: Vec<Result<ThermoPoint>> = alphas
        .par_iter()
        .map(|&a| thermo_point_with(provider, a, scheme))
        .collect();
    let mut points = Vec::with_capacity(results.len());
    for (index, r) in results.into_iter().enumerate() {
        match r {
            Ok(p) => points.push(p),
            Err(e) => {
                return Err(Error::SweepPoint {
                    index,
                    source: Box::new(e),
                })
            }
        }
    }
    let summary = MonotonicitySummary::of(&points);
    Ok(SweepResult { points, summary })
}

pub const DEFAULT_JUMP_THRESHOLD: f64 = 10.0;

/// Differences |ΔC̄| below this (relative to max(1, |C̄|)) are rounding noise.
pub const JUMP_NOISE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub points: usize,
    /// Largest |ΔC̄|/Δᾱ.
    pub max_normalized_jump: f64,
    /// Largest |Dᵢ| / max(|Dᵢ₋₁|, |Dᵢ₊₁|) over intervals above the noise floor.
    pub max_slope_ratio: f64,
    pub threshold: f64,
    /// Interval indices i (between points i and i+1) that look like jumps.
    pub flagged: Vec<usize>,
    pub c_max: f64,
}

impl ContinuityReport {
    pub fn is_continuous(&self) -> bool {
        self.flagged.is_empty()
    }
}

/// Looks for an interval whose difference quotient of C̄ dwarfs both
/// neighbours.
pub fn continuity_scan_points(points: &[ThermoPoint], threshold: f64) -> ContinuityReport {
    let quotients: Vec<f64> = points
        .windows(2)
        .map(|w| (w[1].c_bar - w[0].c_bar) / (w[1].alpha_bar - w[0].alpha_bar))
        .collect();
    let mut max_ratio: f64 = 0.0;
    let mut flagged = Vec::new();
    for (i, w) in points.windows(2).enumerate() {
        let dc = (w[1].c_bar - w[0].c_bar).abs();
        let scale = w[0].c_bar.abs().max(w[1].c_bar.abs()).max(1.0);
        if dc <= JUMP_NOISE_FLOOR * scale {
            continue;
        }
        let left = if i > 0 { quotients[i - 1].abs() } else { 0.0 };
        let right = quotients.get(i + 1).map_or(0.0, |d| d.abs());
        let neighbour = left.max(right);
        if i == 0 && quotients.len() == 1 {
            continue;
        }
        let ratio = if neighbour == 0.0 {
            f64::INFINITY
        } else {
            quotients[i].abs() / neighbour
        };
        max_ratio = max_ratio.max(ratio);
        if ratio > threshold {
            flagged.push(i);
        }
    }
    ContinuityReport {
        points: points.len(),
        max_normalized_jump: quotients.iter().fold(0.0, |m: f64, d| m.max(d.abs())),
        max_slope_ratio: max_ratio,
        threshold,
        flagged,
        c_max: points.iter().map(|p| p.c_bar).fold(f64::NEG_INFINITY, f64::max),
    }
}

pub fn continuity_scan(spec: &SweepSpec, threshold: f64) -> Result<ContinuityReport> {
    let result = sweep(spec)?;
    Ok(continuity_scan_points(&result.points, threshold))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HighTAsymptotics {
    pub z: f64,
    pub u: f64,
    pub c: f64,
}

/// 3D: Z ∼ ᾱ³/4, Ū ∼ 3ᾱ, C̄ ∼ 3.
pub fn high_t_asymptotics(alpha_bar: f64) -> HighTAsymptotics {
    HighTAsymptotics {
        z: alpha_bar.powi(3) / 4.0,
        u: 3.0 * alpha_bar,
        c: 3.0,
    }
}

/// 1D: Z ∼ ᾱ, Ū ∼ ᾱ, C̄ ∼ 1.
pub fn high_t_asymptotics_1d(alpha_bar: f64) -> HighTAsymptotics {
    HighTAsymptotics {
        z: alpha_bar,
        u: alpha_bar,
        c: 1.0,
    }
}
