//! Canonical partition functions of the oscillator spectrum, ground energy
//! subtracted, as functions of ᾱ = 1/(βξ).
//!
//! ```text
//! 3D:  Z = Σ (1 + n')² e^{−2n'/ᾱ}
//! 1D:  Z = Σ e^{−N/ᾱ}
//! ```
//!
//! Three evaluations: the truncated sum with a certified tail bound, the
//! Euler-Maclaurin approximants, and the geometric closed forms.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::quad::integrate_half_line;
use crate::specfun::{bernoulli, BERNOULLI_K_MAX};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Mode {
    /// Degenerate 3D levels, weight (1 + n')².
    #[default]
    #[serde(rename = "3d")]
    ThreeD,
    /// Non-degenerate 1D ladder.
    #[serde(rename = "1d")]
    OneD,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Direct,
    EulerMaclaurin,
    ClosedFormExact,
}

/// Which 1D Euler-Maclaurin expression to use at order 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaVariant {
    /// ½ + ᾱ + 1/(12ᾱ) − 1/(720ᾱ³)
    #[default]
    Derived,
    /// ½ + ᾱ + 1/(12ᾱ) − ᾱ³/5400
    PaperLiteral,
}

pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-14;

/// Hard limit on the number of direct-sum terms.
pub const MAX_DIRECT_TERMS: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionSpec {
    pub mode: Mode,
    pub alpha_bar: f64,
    /// Number of direct-sum terms; `None` picks the smallest certified cutoff.
    pub cutoff: Option<usize>,
    pub em_order: usize,
    pub variant: FormulaVariant,
    /// Relative bound on the neglected tail of the direct sum.
    pub tail_tolerance: f64,
}

impl PartitionSpec {
    pub fn new(mode: Mode, alpha_bar: f64) -> Self {
        Self {
            mode,
            alpha_bar,
            cutoff: None,
            em_order: 2,
            variant: FormulaVariant::Derived,
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
        }
    }

    pub fn with_cutoff(mut self, cutoff: usize) -> Self {
        self.cutoff = Some(cutoff);
        self
    }

    pub fn with_em_order(mut self, k_max: usize) -> Self {
        self.em_order = k_max;
        self
    }

    pub fn with_variant(mut self, variant: FormulaVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha_bar)?;
        if self.cutoff == Some(0) {
            return Err(Error::Domain("cutoff must be positive".into()));
        }
        if self.em_order == 0 || self.em_order > BERNOULLI_K_MAX {
            return Err(Error::Domain(format!(
                "em_order {} outside 1..={BERNOULLI_K_MAX}",
                self.em_order
            )));
        }
        if !(self.tail_tolerance > 0.0 && self.tail_tolerance < 1.0) {
            return Err(Error::Domain(format!(
                "tail tolerance {} outside (0, 1)",
                self.tail_tolerance
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionValue {
    pub z: f64,
    pub method: Method,
    /// Bound on the neglected tail; `None` for closed forms.
    pub tail_bound: Option<f64>,
    /// Terms summed; zero for closed forms.
    pub terms: usize,
}

fn check_alpha(alpha_bar: f64) -> Result<()> {
    if alpha_bar.is_finite() && alpha_bar > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "alpha_bar = {alpha_bar} must be finite and positive"
        )))
    }
}

/// Z by the requested method.
pub fn evaluate(spec: &PartitionSpec, method: Method) -> Result<PartitionValue> {
    spec.validate()?;
    match method {
        Method::Direct => partition_direct(spec),
        Method::ClosedFormExact => Ok(closed_form(spec.mode, spec.alpha_bar)),
        Method::EulerMaclaurin => {
            let z = em_laurent(spec.mode, spec.em_order, spec.variant)?.eval(spec.alpha_bar);
            Ok(PartitionValue {
                z,
                method,
                tail_bound: None,
                terms: 0,
            })
        }
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    sum: f64,
    compensation: f64,
}

impl Accumulator {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Parameters of the series Σ (k+1)^p q^k with energies c_k = scale·k/ᾱ.
#[derive(Debug, Clone, Copy)]
struct Series {
    q: f64,
    power: i32,
    scale: f64,
}

impl Series {
    fn new(mode: Mode, alpha_bar: f64) -> Self {
        match mode {
            Mode::ThreeD => Self {
                q: (-2.0 / alpha_bar).exp(),
                power: 2,
                scale: 2.0,
            },
            Mode::OneD => Self {
                q: (-1.0 / alpha_bar).exp(),
                power: 0,
                scale: 1.0,
            },
        }
    }

    fn weight(&self, k: usize) -> f64 {
        ((k + 1) as f64).powi(self.power)
    }

    /// Bound on Σ_{k≥K} (k+1)^p q^k.
    fn tail(&self, cutoff: usize, power: i32) -> f64 {
        if self.q == 0.0 {
            return 0.0;
        }
        let k1 = (cutoff + 1) as f64;
        let ratio = ((k1 + 1.0) / k1).powi(power) * self.q;
        if ratio >= 1.0 {
            return f64::INFINITY;
        }
        let first = k1.powi(power) * self.q.powi(cutoff.min(i32::MAX as usize) as i32);
        if first == 0.0 {
            // q^K underflows; use logs
            let log_first = f64::from(power) * k1.ln() + cutoff as f64 * self.q.ln();
            return log_first.exp() / (1.0 - ratio);
        }
        first / (1.0 - ratio)
    }

    /// Smallest K with tail(K, p + extra) ≤ tol · Σ_{k<K} scale^extra (k+1)^p k^extra q^k
    /// for every extra in 0..=max_extra.
    fn certified_cutoff(&self, tol: f64, max_extra: i32) -> Result<usize> {
        let mut sums = [Accumulator::default(); 3];
        let mut qk = 1.0;
        for k in 0..MAX_DIRECT_TERMS {
            let w = self.weight(k) * qk;
            let kf = k as f64;
            for (j, acc) in sums.iter_mut().enumerate().take(max_extra as usize + 1) {
                acc.add(w * kf.powi(j as i32));
            }
            let cutoff = k + 1;
            let done = (0..=max_extra).all(|j| {
                let bound = self.tail(cutoff, self.power + j);
                bound <= tol * sums[j as usize].value()
            });
            if done {
                return Ok(cutoff);
            }
            qk *= self.q;
        }
        Err(Error::Convergence {
            cutoff: MAX_DIRECT_TERMS,
            tail_bound: self.tail(MAX_DIRECT_TERMS, self.power),
            suggested: MAX_DIRECT_TERMS,
        })
    }

    fn partial_sum(&self, cutoff: usize) -> f64 {
        let mut acc = Accumulator::default();
        let mut qk = 1.0;
        for k in 0..cutoff {
            acc.add(self.weight(k) * qk);
            qk *= self.q;
            if qk == 0.0 {
                break;
            }
        }
        acc.value()
    }
}

/// Truncated sum with a geometric tail bound.
///
/// With an explicit cutoff whose tail exceeds `tail_tolerance`·Z, fails with
/// [`Error::Convergence`] carrying the smallest adequate cutoff.
pub fn partition_direct(spec: &PartitionSpec) -> Result<PartitionValue> {
    spec.validate()?;
    let series = Series::new(spec.mode, spec.alpha_bar);
    let cutoff = match spec.cutoff {
        Some(c) => c,
        None => series.certified_cutoff(spec.tail_tolerance, 0)?,
    };
    let z = series.partial_sum(cutoff);
    let tail_bound = series.tail(cutoff, series.power);
    if !(tail_bound <= spec.tail_tolerance * z) {
        let suggested = series.certified_cutoff(spec.tail_tolerance, 0)?;
        return Err(Error::Convergence {
            cutoff,
            tail_bound,
            suggested,
        });
    }
    Ok(PartitionValue {
        z,
        method: Method::Direct,
        tail_bound: Some(tail_bound),
        terms: cutoff,
    })
}

/// Boltzmann moments of the level energies c_k (in units where Z = Σ w_k e^{−c_k/ᾱ}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyMoments {
    pub z: f64,
    /// ⟨c⟩
    pub mean: f64,
    /// ⟨(c − ⟨c⟩)²⟩
    pub variance: f64,
    pub terms: usize,
}

/// Mean and variance of c_k by direct summation, cutoff certified for all
/// three moments.
pub fn direct_moments(mode: Mode, alpha_bar: f64, tail_tolerance: f64) -> Result<EnergyMoments> {
    check_alpha(alpha_bar)?;
    let series = Series::new(mode, alpha_bar);
    let cutoff = series.certified_cutoff(tail_tolerance, 2)?;
    let mut z = Accumulator::default();
    let mut first = Accumulator::default();
    let mut qk = 1.0;
    for k in 0..cutoff {
        let w = series.weight(k) * qk;
        z.add(w);
        first.add(w * series.scale * k as f64);
        qk *= series.q;
    }
    let z = z.value();
    let mean = first.value() / z;
    let mut second = Accumulator::default();
    let mut qk = 1.0;
    for k in 0..cutoff {
        let d = series.scale * k as f64 - mean;
        second.add(series.weight(k) * qk * d * d);
        qk *= series.q;
    }
    Ok(EnergyMoments {
        z,
        mean,
        variance: second.value() / z,
        terms: cutoff,
    })
}

/// Same moments from the geometric closed forms.
pub fn exact_moments(mode: Mode, alpha_bar: f64) -> Result<EnergyMoments> {
    check_alpha(alpha_bar)?;
    let z = closed_form(mode, alpha_bar).z;
    let (mean, variance) = match mode {
        Mode::ThreeD => {
            let q = (-2.0 / alpha_bar).exp();
            let one_minus = -(-2.0 / alpha_bar).exp_m1();
            (
                2.0 * q / (1.0 + q) + 6.0 * q / one_minus,
                4.0 * q / (1.0 + q).powi(2) + 12.0 * q / one_minus.powi(2),
            )
        }
        Mode::OneD => {
            let q = (-1.0 / alpha_bar).exp();
            let one_minus = -(-1.0 / alpha_bar).exp_m1();
            (q / one_minus, q / one_minus.powi(2))
        }
    };
    Ok(EnergyMoments {
        z,
        mean,
        variance,
        terms: 0,
    })
}

/// (1 + q)/(1 − q)³ with q = e^{−2/ᾱ} in 3D, 1/(1 − e^{−1/ᾱ}) in 1D.
pub fn closed_form(mode: Mode, alpha_bar: f64) -> PartitionValue {
    let z = match mode {
        Mode::ThreeD => {
            let q = (-2.0 / alpha_bar).exp();
            let one_minus = -(-2.0 / alpha_bar).exp_m1();
            (1.0 + q) / one_minus.powi(3)
        }
        Mode::OneD => 1.0 / -(-1.0 / alpha_bar).exp_m1(),
    };
    PartitionValue {
        z,
        method: Method::ClosedFormExact,
        tail_bound: None,
        terms: 0,
    }
}

/// A summand f on [0, ∞) with the data the Euler-Maclaurin formula needs.
pub trait EmSummand {
    fn value_at_zero(&self) -> f64;
    /// f^{(2k−1)}(0), k ≥ 1.
    fn odd_derivative_at_zero(&self, k: usize) -> f64;
    /// ∫₀^∞ f(x) dx
    fn integral(&self) -> f64;
}

/// Σ_{m≥0} f(m) ≈ ½f(0) + ∫₀^∞ f − Σ_{k=1}^{k_max} B₂ₖ/(2k)! f^{(2k−1)}(0).
pub fn em_sum(f: &dyn EmSummand, k_max: usize) -> Result<f64> {
    if k_max > BERNOULLI_K_MAX {
        return Err(Error::Domain(format!(
            "k_max = {k_max} exceeds {BERNOULLI_K_MAX}"
        )));
    }
    let mut total = 0.5 * f.value_at_zero() + f.integral();
    for k in 1..=k_max {
        total -= em_weight(k)? * f.odd_derivative_at_zero(k);
    }
    Ok(total)
}

/// B₂ₖ/(2k)!
fn em_weight(k: usize) -> Result<f64> {
    let b = bernoulli(k)?;
    let fact: f64 = (1..=2 * k).map(|i| i as f64).product();
    Ok(*b.numer() as f64 / *b.denom() as f64 / fact)
}

/// f(x) = c with a caller-chosen integral (the engine never evaluates f).
#[derive(Debug, Clone, Copy)]
pub struct ConstantSummand {
    pub value: f64,
    pub integral: f64,
}

impl EmSummand for ConstantSummand {
    fn value_at_zero(&self) -> f64 {
        self.value
    }
    fn odd_derivative_at_zero(&self, _k: usize) -> f64 {
        0.0
    }
    fn integral(&self) -> f64 {
        self.integral
    }
}

/// f(x) = e^{−bx}
#[derive(Debug, Clone, Copy)]
pub struct ExpSummand {
    pub b: f64,
}

impl EmSummand for ExpSummand {
    fn value_at_zero(&self) -> f64 {
        1.0
    }
    fn odd_derivative_at_zero(&self, k: usize) -> f64 {
        (-self.b).powi(2 * k as i32 - 1)
    }
    fn integral(&self) -> f64 {
        1.0 / self.b
    }
}

/// f(x) = (1 + x)² e^{−bx}
#[derive(Debug, Clone, Copy)]
pub struct QuadraticExpSummand {
    pub b: f64,
}

impl QuadraticExpSummand {
    /// f^{(j)}(0) = (−b)^j + 2j(−b)^{j−1} + j(j−1)(−b)^{j−2}
    pub fn derivative_at_zero(&self, j: u32) -> f64 {
        let mb = -self.b;
        let jf = f64::from(j);
        let mut v = mb.powi(j as i32);
        if j >= 1 {
            v += 2.0 * jf * mb.powi(j as i32 - 1);
        }
        if j >= 2 {
            v += jf * (jf - 1.0) * mb.powi(j as i32 - 2);
        }
        v
    }
}

impl EmSummand for QuadraticExpSummand {
    fn value_at_zero(&self) -> f64 {
        1.0
    }
    fn odd_derivative_at_zero(&self, k: usize) -> f64 {
        self.derivative_at_zero(2 * k as u32 - 1)
    }
    fn integral(&self) -> f64 {
        let b = self.b;
        1.0 / b + 2.0 / (b * b) + 2.0 / (b * b * b)
    }
}

/// Coefficients of the 3D order-2 closed form
/// `constant + integral_scale·ᾱ³[1 + 2/ᾱ(1 + 1/ᾱ)] + correction_scale/ᾱ·[3 + 2/(3ᾱ)(1 − 1/(3ᾱ))]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Em3dCoefficients {
    pub constant: f64,
    pub integral_scale: f64,
    pub correction_scale: f64,
}

impl Default for Em3dCoefficients {
    fn default() -> Self {
        Self {
            constant: 1.0 / 3.0,
            integral_scale: 0.25,
            correction_scale: 0.05,
        }
    }
}

impl Em3dCoefficients {
    fn laurent(&self) -> Laurent {
        let (c, s, t) = (self.constant, self.integral_scale, self.correction_scale);
        Laurent::new(vec![
            (3, s),
            (2, 2.0 * s),
            (1, 2.0 * s),
            (0, c),
            (-1, 3.0 * t),
            (-2, 2.0 * t / 3.0),
            (-3, -2.0 * t / 9.0),
        ])
    }
}

/// 1/3 + ᾱ³/4[1 + 2/ᾱ(1 + 1/ᾱ)] + 1/(20ᾱ)[3 + 2/(3ᾱ)(1 − 1/(3ᾱ))]
pub fn partition_em_3d(alpha_bar: f64) -> Result<PartitionValue> {
    partition_em_3d_with(alpha_bar, &Em3dCoefficients::default())
}

pub fn partition_em_3d_with(alpha_bar: f64, coeffs: &Em3dCoefficients) -> Result<PartitionValue> {
    check_alpha(alpha_bar)?;
    let a = alpha_bar;
    let z = coeffs.constant
        + coeffs.integral_scale * a.powi(3) * (1.0 + 2.0 / a * (1.0 + 1.0 / a))
        + coeffs.correction_scale / a * (3.0 + 2.0 / (3.0 * a) * (1.0 - 1.0 / (3.0 * a)));
    Ok(PartitionValue {
        z,
        method: Method::EulerMaclaurin,
        tail_bound: None,
        terms: 0,
    })
}

/// The 3D order-2 closed form in exact rational arithmetic.
pub fn partition_em_3d_rational(alpha_bar: Rational64) -> Result<Rational64> {
    if alpha_bar <= Rational64::from_integer(0) {
        return Err(Error::Domain(format!("alpha_bar = {alpha_bar} must be positive")));
    }
    let r = Rational64::new;
    let one = Rational64::from_integer(1);
    let a = alpha_bar;
    Ok(r(1, 3)
        + a * a * a / 4 * (one + r(2, 1) / a * (one + one / a))
        + one / (a * 20) * (r(3, 1) + r(2, 3) / a * (one - one / (a * 3))))
}

/// ½ + ᾱ + 1/(12ᾱ) − 1/(720ᾱ³), or with −ᾱ³/5400 as the last term.
pub fn partition_em_1d(alpha_bar: f64, variant: FormulaVariant) -> Result<PartitionValue> {
    check_alpha(alpha_bar)?;
    let a = alpha_bar;
    let last = match variant {
        FormulaVariant::Derived => -1.0 / (720.0 * a.powi(3)),
        FormulaVariant::PaperLiteral => -a.powi(3) / 5400.0,
    };
    Ok(PartitionValue {
        z: 0.5 + a + 1.0 / (12.0 * a) + last,
        method: Method::EulerMaclaurin,
        tail_bound: None,
        terms: 0,
    })
}

/// (1/(4x³))[1 + 2x(1 + x)] e^{−3x} = ∫₀^∞ (1+t)² e^{−x(2t+3)} dt, x = βξ.
pub fn convergence_integral(beta_xi: f64) -> Result<f64> {
    check_alpha(beta_xi)?;
    let x = beta_xi;
    Ok((1.0 + 2.0 * x * (1.0 + x)) * (-3.0 * x).exp() / (4.0 * x.powi(3)))
}

/// The same integral by quadrature.
pub fn convergence_integral_quadrature(beta_xi: f64) -> Result<f64> {
    check_alpha(beta_xi)?;
    Ok(integrate_half_line(
        |t| (1.0 + t).powi(2) * (-beta_xi * (2.0 * t + 3.0)).exp(),
        1e-15,
    ))
}

/// Finite Laurent polynomial Σ cⱼ ᾱ^j.
#[derive(Debug, Clone, PartialEq)]
pub struct Laurent {
    terms: Vec<(i32, f64)>,
}

impl Laurent {
    pub fn new(terms: Vec<(i32, f64)>) -> Self {
        Self { terms }
    }

    pub fn eval(&self, a: f64) -> f64 {
        self.terms.iter().map(|&(j, c)| c * a.powi(j)).sum()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.terms
                .iter()
                .filter(|&&(j, _)| j != 0)
                .map(|&(j, c)| (j - 1, c * f64::from(j)))
                .collect(),
        )
    }
}

/// Euler-Maclaurin approximant of order `k_max` as a Laurent polynomial in ᾱ.
///
/// At order 2 the 3D result coincides with [`partition_em_3d`] and the
/// derived 1D result with [`partition_em_1d`]. The paper-literal 1D variant
/// exists only at order 2.
pub fn em_laurent(mode: Mode, k_max: usize, variant: FormulaVariant) -> Result<Laurent> {
    if k_max == 0 || k_max > BERNOULLI_K_MAX {
        return Err(Error::Domain(format!(
            "em_order {k_max} outside 1..={BERNOULLI_K_MAX}"
        )));
    }
    match (mode, variant) {
        (Mode::OneD, FormulaVariant::PaperLiteral) => {
            if k_max != 2 {
                return Err(Error::Usage(
                    "the paper-literal 1D form is defined only at em_order 2".into(),
                ));
            }
            Ok(Laurent::new(vec![
                (3, -1.0 / 5400.0),
                (1, 1.0),
                (0, 0.5),
                (-1, 1.0 / 12.0),
            ]))
        }
        (Mode::OneD, FormulaVariant::Derived) => {
            // f = e^{−x/ᾱ}: f^{(j)}(0) = (−1)^j ᾱ^{−j}
            let mut terms = vec![(0, 0.5), (1, 1.0)];
            for k in 1..=k_max {
                let j = 2 * k as i32 - 1;
                terms.push((-j, em_weight(k)?));
            }
            Ok(Laurent::new(terms))
        }
        (Mode::ThreeD, _) => {
            // f = (1+x)² e^{−bx}, b = 2/ᾱ, so (−b)^i = (−2)^i ᾱ^{−i}
            let mut terms = vec![(0, 0.5), (1, 0.5), (2, 0.5), (3, 0.25)];
            for k in 1..=k_max {
                let w = em_weight(k)?;
                let j = 2 * k as i32 - 1;
                let jf = f64::from(j);
                let pow = |i: i32| (-2f64).powi(i);
                terms.push((-j, -w * pow(j)));
                terms.push((-(j - 1), -w * 2.0 * jf * pow(j - 1)));
                if j >= 2 {
                    terms.push((-(j - 2), -w * jf * (jf - 1.0) * pow(j - 2)));
                }
            }
            Ok(Laurent::new(terms))
        }
    }
}

/// Laurent form of the order-2 3D closed form with the given coefficients.
pub fn em_3d_laurent_with(coeffs: &Em3dCoefficients) -> Laurent {
    coeffs.laurent()
}
