//! Special functions at the scale needed by the bound-state solutions.
//!
//! Everything here is a polynomial or a finite product, so no series is ever
//! truncated: Jacobi polynomials come from the three-term recurrence, the
//! confluent hypergeometric function only appears in its terminating form
//! ₁F₁(−n; b; y), and the Γ-ratio prefactor is a telescoping product.

use num_rational::Rational64;

use crate::{Error, Result};

/// Largest k for which [`bernoulli`] returns B₂ₖ.
pub const BERNOULLI_K_MAX: usize = 8;

// B₂, B₄, ..., B₁₆
const BERNOULLI_TABLE: [(i64, i64); BERNOULLI_K_MAX] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
];

/// Degree and indices of P_s^{(α,β)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub degree: u32,
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiParams {
    pub fn new(degree: u32, alpha: f64, beta: f64) -> Result<Self> {
        let p = Self {
            degree,
            alpha,
            beta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn symmetric(degree: u32, index: f64) -> Result<Self> {
        Self::new(degree, index, index)
    }

    fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || !self.beta.is_finite() {
            return Err(Error::Domain(format!(
                "Jacobi indices must be finite, got ({}, {})",
                self.alpha, self.beta
            )));
        }
        if self.alpha <= -1.0 || self.beta <= -1.0 {
            return Err(Error::Domain(format!(
                "Jacobi indices must exceed -1, got ({}, {})",
                self.alpha, self.beta
            )));
        }
        Ok(())
    }
}

/// P_s^{(α,β)}(x) on [−1, 1] by the standard three-term recurrence.
pub fn jacobi_poly(p: &JacobiParams, x: f64) -> Result<f64> {
    p.validate()?;
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "Jacobi argument {x} outside [-1, 1]"
        )));
    }
    let (a, b) = (p.alpha, p.beta);
    let mut prev = 1.0;
    if p.degree == 0 {
        return Ok(prev);
    }
    let mut cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for n in 2..=p.degree {
        let n = f64::from(n);
        let s = 2.0 * n + a + b;
        let c0 = 2.0 * n * (n + a + b) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
        let next = (c1 * cur - c2 * prev) / c0;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// ₁F₁(−n; b; y), a polynomial of degree n in y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp1F1Terminating {
    pub n: u32,
    pub b: f64,
    pub y: f64,
}

impl Hyp1F1Terminating {
    pub fn new(n: u32, b: f64, y: f64) -> Result<Self> {
        let h = Self { n, b, y };
        h.validate()?;
        Ok(h)
    }

    fn validate(&self) -> Result<()> {
        if !self.b.is_finite() || (self.b <= 0.0 && self.b == self.b.round()) {
            return Err(Error::Domain(format!(
                "1F1 lower parameter {} must not be a non-positive integer",
                self.b
            )));
        }
        if !(self.y >= 0.0 && self.y.is_finite()) {
            return Err(Error::Domain(format!(
                "1F1 argument {} must be finite and non-negative",
                self.y
            )));
        }
        Ok(())
    }
}

/// Sum of the n+1 nonzero terms (−n)ₖ yᵏ / ((b)ₖ k!).
pub fn hyp1f1_terminating(h: &Hyp1F1Terminating) -> Result<f64> {
    h.validate()?;
    let n = f64::from(h.n);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..h.n {
        let k = f64::from(k);
        term *= (k - n) / (h.b + k) * h.y / (k + 1.0);
        sum += term;
    }
    Ok(sum)
}

/// Γ(n + 3/2 + ℓ) / (n! Γ(3/2 + ℓ)) as the product ∏ₖ₌₁ⁿ (ℓ + ½ + k)/k.
///
/// Each factor is O(1), so the result does not overflow for n up to 10³
/// even though the individual Gamma values would.
pub fn gamma_ratio_prefactor(n: u32, ell: f64) -> Result<f64> {
    let b = 1.5 + ell;
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::Domain(format!(
            "3/2 + ell = {b} must be positive"
        )));
    }
    Ok((1..=n).fold(1.0, |acc, k| {
        let k = f64::from(k);
        acc * (b - 1.0 + k) / k
    }))
}

/// B₂ₖ for 1 ≤ k ≤ [`BERNOULLI_K_MAX`] as an exact rational.
pub fn bernoulli(k: usize) -> Result<Rational64> {
    if k == 0 || k > BERNOULLI_K_MAX {
        return Err(Error::Range {
            index: k,
            len: BERNOULLI_K_MAX,
        });
    }
    let (num, den) = BERNOULLI_TABLE[k - 1];
    Ok(Rational64::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Generalized binomial coefficient C(a, k) for real a.
    fn gbinom(a: f64, k: u32) -> f64 {
        (0..k).fold(1.0, |acc, j| acc * (a - f64::from(j)) / f64::from(j + 1))
    }

    /// Explicit sum
    /// P_n^{(α,β)}(x) = Σₖ C(n+α, n−k) C(n+β, k) ((x−1)/2)ᵏ ((x+1)/2)ⁿ⁻ᵏ.
    fn jacobi_series(n: u32, a: f64, b: f64, x: f64) -> f64 {
        let nf = f64::from(n);
        (0..=n)
            .map(|k| {
                gbinom(nf + a, n - k)
                    * gbinom(nf + b, k)
                    * ((x - 1.0) / 2.0).powi(k as i32)
                    * ((x + 1.0) / 2.0).powi((n - k) as i32)
            })
            .sum()
    }

    fn laguerre(n: u32, alpha: f64, y: f64) -> f64 {
        let mut prev = 1.0;
        if n == 0 {
            return prev;
        }
        let mut cur = 1.0 + alpha - y;
        for k in 1..n {
            let k = f64::from(k);
            let next = ((2.0 * k + 1.0 + alpha - y) * cur - (k + alpha) * prev) / (k + 1.0);
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Each term built from its own Pochhammer products, no term ratios.
    fn hyp1f1_brute(n: u32, b: f64, y: f64) -> (f64, f64) {
        let mut sum = 0.0;
        let mut scale = 0.0;
        for k in 0..=n {
            let num: f64 = (0..k).map(|j| f64::from(j) - f64::from(n)).product();
            let den: f64 = (0..k).map(|j| b + f64::from(j)).product();
            let fact: f64 = (1..=k).map(f64::from).product();
            let t = num / den * y.powi(k as i32) / fact;
            sum += t;
            scale += t.abs();
        }
        (sum, scale)
    }

    #[test]
    fn jacobi_degree_zero_is_one() {
        let p = JacobiParams::symmetric(0, 1.5).unwrap();
        assert_eq!(jacobi_poly(&p, 0.3).unwrap(), 1.0);
    }

    #[test]
    fn jacobi_degree_one_symmetric() {
        for &(a, x) in &[(0.0, 0.4), (1.5, -0.7), (3.25, 0.9)] {
            let p = JacobiParams::symmetric(1, a).unwrap();
            assert_relative_eq!(jacobi_poly(&p, x).unwrap(), (a + 1.0) * x, max_relative = 1e-15);
        }
    }

    #[test]
    fn jacobi_matches_series_oracle() {
        let p = JacobiParams::symmetric(3, 2.0).unwrap();
        let oracle = jacobi_series(3, 2.0, 2.0, 0.5);
        assert_relative_eq!(oracle, -0.625, max_relative = 1e-15);
        assert_relative_eq!(jacobi_poly(&p, 0.5).unwrap(), -0.625, max_relative = 1e-14);

        for n in 0..12 {
            for &(a, b) in &[(0.5, 0.5), (-0.5, 1.25), (2.0, 0.0), (3.7, 3.7)] {
                for &x in &[-1.0, -0.35, 0.0, 0.6, 1.0] {
                    let p = JacobiParams::new(n, a, b).unwrap();
                    let got = jacobi_poly(&p, x).unwrap();
                    let want = jacobi_series(n, a, b, x);
                    assert!(
                        (got - want).abs() <= 1e-11 * want.abs().max(1.0),
                        "n={n} a={a} b={b} x={x}: {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn jacobi_rejects_bad_input() {
        assert!(matches!(JacobiParams::new(2, -1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(JacobiParams::new(2, 0.0, f64::NAN), Err(Error::Domain(_))));
        let p = JacobiParams::symmetric(2, 1.0).unwrap();
        assert!(matches!(jacobi_poly(&p, 1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn hyp1f1_small_cases() {
        let h = Hyp1F1Terminating::new(0, 1.5, 2.7).unwrap();
        assert_eq!(hyp1f1_terminating(&h).unwrap(), 1.0);
        let h = Hyp1F1Terminating::new(1, 2.0, 1.0).unwrap();
        assert_relative_eq!(hyp1f1_terminating(&h).unwrap(), 0.5, max_relative = 1e-15);
    }

    #[test]
    fn hyp1f1_matches_laguerre_identity() {
        // 1F1(-n; α+1; y) = L_n^{(α)}(y) / C(n+α, n)
        let want = 9703.0 / 39375.0;
        let oracle = laguerre(3, 1.5, 0.8) / gbinom(3.0 + 1.5, 3);
        assert_relative_eq!(oracle, want, max_relative = 1e-14);
        let h = Hyp1F1Terminating::new(3, 2.5, 0.8).unwrap();
        assert_relative_eq!(hyp1f1_terminating(&h).unwrap(), want, max_relative = 1e-14);
    }

    #[test]
    fn hyp1f1_rejects_nonpositive_integer_b() {
        for b in [0.0, -1.0, -4.0] {
            assert!(Hyp1F1Terminating::new(2, b, 1.0).is_err());
        }
        assert!(Hyp1F1Terminating::new(2, -0.5, 1.0).is_ok());
        assert!(Hyp1F1Terminating::new(2, 1.5, -1.0).is_err());
    }

    #[test]
    fn gamma_ratio_examples() {
        assert_eq!(gamma_ratio_prefactor(0, 2.0).unwrap(), 1.0);
        assert_relative_eq!(gamma_ratio_prefactor(1, 0.0).unwrap(), 1.5, max_relative = 1e-15);
        assert_relative_eq!(gamma_ratio_prefactor(2, 1.0).unwrap(), 4.375, max_relative = 1e-15);
        assert!(gamma_ratio_prefactor(1000, 3.0).unwrap().is_finite());
        assert!(matches!(gamma_ratio_prefactor(1, -1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn bernoulli_table_matches_recurrence() {
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0 with B₁ = −½, B_odd>1 = 0.
        let kmax = BERNOULLI_K_MAX;
        let mut b = vec![Rational64::from_integer(0); 2 * kmax + 1];
        b[0] = Rational64::from_integer(1);
        for m in 1..=2 * kmax {
            let mut acc = Rational64::from_integer(0);
            let mut binom: i64 = 1;
            for j in 0..m {
                acc += Rational64::from_integer(binom) * b[j];
                binom = binom * (m as i64 + 1 - j as i64) / (j as i64 + 1);
            }
            b[m] = -acc / Rational64::from_integer(m as i64 + 1);
        }
        assert_eq!(b[1], Rational64::new(-1, 2));
        for k in 1..=kmax {
            assert_eq!(bernoulli(k).unwrap(), b[2 * k], "B_{}", 2 * k);
        }
        assert_eq!(bernoulli(1).unwrap(), Rational64::new(1, 6));
        assert_eq!(bernoulli(2).unwrap(), Rational64::new(-1, 30));
        assert_eq!(bernoulli(3).unwrap(), Rational64::new(1, 42));
        assert!(matches!(bernoulli(0), Err(Error::Range { .. })));
        assert!(matches!(bernoulli(kmax + 1), Err(Error::Range { .. })));
    }

    proptest! {
        #[test]
        fn jacobi_symmetric_parity(s in 0u32..=10, a in -0.99f64..6.0, x in -1.0f64..=1.0) {
            let p = JacobiParams::symmetric(s, a).unwrap();
            let plus = jacobi_poly(&p, x).unwrap();
            let minus = jacobi_poly(&p, -x).unwrap();
            let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((minus - sign * plus).abs() <= 1e-12 * plus.abs().max(1.0));
        }

        #[test]
        fn hyp1f1_matches_brute_force(n in 0u32..=20, b in 0.5f64..12.0, y in 0.0f64..4.0) {
            let h = Hyp1F1Terminating::new(n, b, y).unwrap();
            let got = hyp1f1_terminating(&h).unwrap();
            let (want, scale) = hyp1f1_brute(n, b, y);
            // relative to the absolute scale of the series
            prop_assert!((got - want).abs() <= 1e-13 * scale, "{got} vs {want}");
        }

        #[test]
        fn gamma_ratio_times_factorial_increases(ell in -0.49f64..8.0, n in 0u32..60) {
            let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
            let lo = gamma_ratio_prefactor(n, ell).unwrap() * fact(n);
            let hi = gamma_ratio_prefactor(n + 1, ell).unwrap() * fact(n + 1);
            prop_assert!(hi > lo);
        }
    }
}
