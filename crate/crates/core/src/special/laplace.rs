//! Closed forms for Laplace transforms of I_α against e^{-w}.

use super::gamma::ln_gamma_unchecked;
use crate::error::{Error, Result};

fn check(alpha: f64, gamma: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("order must be positive, got {alpha}")));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain(format!("similarity ratio must lie in (0, 1), got {gamma}")));
    }
    Ok(())
}

/// Geometric ratio `q = γ / (1 + √(1 - γ²))` governing both closed forms.
pub fn similarity_ratio(gamma: f64) -> f64 {
    gamma / (1.0 + (1.0 - gamma * gamma).sqrt())
}

/// `∫_0^∞ w⁻¹ e^{-w} I_α(γw) dw = α⁻¹ γ^α [1 + √(1-γ²)]^{-α}`.
pub fn laplace_bessel_ratio(alpha: f64, gamma: f64) -> Result<f64> {
    check(alpha, gamma)?;
    Ok((alpha * similarity_ratio(gamma).ln()).exp() / alpha)
}

/// `∫_0^∞ e^{-w} I_α(γw) dw = γ^α / (√(1-γ²) [1 + √(1-γ²)]^α)`.
pub fn laplace_bessel(alpha: f64, gamma: f64) -> Result<f64> {
    check(alpha, gamma)?;
    let root = (1.0 - gamma * gamma).sqrt();
    Ok((alpha * similarity_ratio(gamma).ln()).exp() / root)
}

/// `∫_0^∞ w^{-p/2} (1+w)^{-2} dw = Γ(1 - p/2) Γ(1 + p/2)` for 0 < p < 2.
pub fn beta_tail_integral(p1: f64) -> Result<f64> {
    if !(p1 > 0.0 && p1 < 2.0) {
        return Err(Error::Domain(format!("integral diverges unless 0 < p1 < 2, got {p1}")));
    }
    Ok((ln_gamma_unchecked(1.0 - 0.5 * p1) + ln_gamma_unchecked(1.0 + 0.5 * p1)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_examples() {
        assert!((laplace_bessel_ratio(1.0, 0.6).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((laplace_bessel(1.0, 0.6).unwrap() - 0.6 / (0.8 * 1.8)).abs() < 1e-15);
    }

    #[test]
    fn small_gamma_leading_term() {
        let g: f64 = 1e-6;
        for &a in &[0.5, 1.0, 2.5] {
            let lead = (0.5 * g).powf(a) / a;
            assert!((laplace_bessel_ratio(a, g).unwrap() / lead - 1.0).abs() < 1e-9);
            let lead = (0.5 * g).powf(a);
            assert!((laplace_bessel(a, g).unwrap() / lead - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn laplace_bessel_increasing_in_gamma() {
        for &a in &[0.5, 1.0, 7.0] {
            let mut prev = 0.0;
            for i in 1..100 {
                let v = laplace_bessel(a, i as f64 / 100.0).unwrap();
                assert!(v > prev);
                prev = v;
            }
        }
    }

    #[test]
    fn beta_integral_values() {
        assert!((beta_tail_integral(1.0).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        assert!((beta_tail_integral(1e-9).unwrap() - 1.0).abs() < 1e-8);
        assert!(beta_tail_integral(2.0).is_err());
        assert!(beta_tail_integral(0.0).is_err());
    }

    #[test]
    fn rejects_gamma_at_one() {
        assert!(laplace_bessel_ratio(1.0, 1.0).is_err());
        assert!(laplace_bessel(1.0, 0.0).is_err());
    }
}
