//! Numerical integration over [0, ∞).

/// ∫₀^∞ f(x) dx by double-exponential quadrature after x = t/(1−t).
///
/// `f` must decay fast enough for the mapped integrand to vanish at t → 1;
/// non-finite samples (overflowing polynomial × underflowing exponential)
/// are treated as zero.
pub fn integrate_half_line<F>(f: F, target_absolute_error: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let mapped = |t: f64| {
        let one_minus = 1.0 - t;
        if one_minus <= 0.0 {
            return 0.0;
        }
        let x = t / one_minus;
        let v = f(x) / (one_minus * one_minus);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    quadrature::integrate(mapped, 0.0, 1.0, target_absolute_error).integral
}

/// ∫ₐᵇ f(x) dx on a finite interval.
pub fn integrate<F>(f: F, a: f64, b: f64, target_absolute_error: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    quadrature::integrate(f, a, b, target_absolute_error).integral
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exponential_moments() {
        // ∫ xⁿ e^{−x} = n!
        for (n, fact) in [(0, 1.0), (1, 1.0), (2, 2.0), (5, 120.0)] {
            let v = integrate_half_line(|x| x.powi(n) * (-x).exp(), 1e-14);
            assert_relative_eq!(v, fact, max_relative = 1e-12);
        }
    }

    #[test]
    fn gaussian() {
        let v = integrate_half_line(|x| (-x * x).exp(), 1e-14);
        assert_relative_eq!(v, 0.5 * std::f64::consts::PI.sqrt(), max_relative = 1e-12);
    }
}
