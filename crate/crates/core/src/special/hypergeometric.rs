//! Legendre functions of real degree and the scaled Kummer function.
//!
//! `P_ν(x) = F(-ν, ν+1; 1; (1-x)/2)` is summed directly while the series is
//! well conditioned. For large degrees the terms grow like `exp(2ν√z)` before
//! cancelling, so once the largest term exceeds the sum by more than 1e6 the
//! value is carried up from degrees `f` and `f+1`, `f = ν - ⌊ν⌋`, by the
//! three-term recurrence in the degree, which is neutrally stable on
//! (-1, 1). The Mehler–Dirichlet integral
//!
//! ```text
//! P_ν(cos θ) = (2/π) ∫_0^{π/2} cos((ν+½)φ) / cos(φ/2) dψ,   φ = 2 asin(sin(θ/2) sin ψ)
//! ```
//!
//! is kept as an independent check.

use std::f64::consts::{FRAC_PI_2, PI};

use super::quadrature::{integrate_adaptive, QuadratureSpec};
use crate::error::{Error, Result};

const CONDITION_LIMIT: f64 = 1e6;
const MAX_SERIES_TERMS: usize = 200_000;

/// Gauss hypergeometric series `F(a, b; c; z)` for 0 ≤ z < 1 together with
/// the largest term magnitude seen, or None if it did not terminate.
fn gauss_series(a: f64, b: f64, c: f64, z: f64) -> Option<(f64, f64)> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut largest = 1.0f64;
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        largest = largest.max(term.abs());
        if term == 0.0 {
            return Some((sum, largest));
        }
        // |a + k| passes through its minimum near k = -a; after that the
        // term ratio stays below z in magnitude.
        if kf > -a && term.abs() < 1e-17 * sum.abs() {
            return Some((sum, largest));
        }
    }
    None
}

fn check_degree(nu: f64, x: f64) -> Result<()> {
    if !(nu >= 0.0) || !nu.is_finite() || !(x > -1.0 && x <= 1.0) {
        return Err(Error::Domain(format!(
            "legendre_p needs nu >= 0 and -1 < x <= 1, got nu = {nu}, x = {x}"
        )));
    }
    Ok(())
}

/// Legendre function of the first kind `P_ν(x)` for real ν ≥ 0, -1 < x ≤ 1.
pub fn legendre_p(nu: f64, x: f64) -> Result<f64> {
    check_degree(nu, x)?;
    let z = 0.5 * (1.0 - x);
    if let Some((sum, largest)) = gauss_series(-nu, nu + 1.0, 1.0, z) {
        if largest <= CONDITION_LIMIT * sum.abs().max(1e-3) {
            return Ok(sum);
        }
    }
    legendre_p_recurrence(nu, x)
}

/// `P_ν(x)` by upward recurrence `(μ+1) P_{μ+1} = (2μ+1) x P_μ - μ P_{μ-1}`
/// from the two lowest degrees with the same fractional part.
fn legendre_p_recurrence(nu: f64, x: f64) -> Result<f64> {
    let steps = nu.floor();
    let f = nu - steps;
    let z = 0.5 * (1.0 - x);
    let series = |d: f64| {
        gauss_series(-d, d + 1.0, 1.0, z)
            .map(|(v, _)| v)
            .ok_or_else(|| Error::SeriesNotConverged {
                terms: MAX_SERIES_TERMS,
                bound: f64::NAN,
            })
    };
    let mut prev = series(f)?;
    if steps == 0.0 {
        return Ok(prev);
    }
    let mut cur = series(f + 1.0)?;
    let mut mu = f + 1.0;
    for _ in 1..steps as usize {
        let next = ((2.0 * mu + 1.0) * x * cur - mu * prev) / (mu + 1.0);
        prev = cur;
        cur = next;
        mu += 1.0;
    }
    Ok(cur)
}

/// `P_ν(cos θ)` from the Mehler–Dirichlet integral, 0 < θ < π.
pub fn legendre_p_mehler(nu: f64, theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < PI) {
        if theta == 0.0 {
            return Ok(1.0);
        }
        return Err(Error::Domain(format!("Mehler–Dirichlet needs 0 < theta < pi, got {theta}")));
    }
    let s = (0.5 * theta).sin();
    let k = nu + 0.5;
    let integrand = |psi: f64| {
        let phi = 2.0 * (s * psi.sin()).asin();
        (k * phi).cos() / (0.5 * phi).cos()
    };
    let spec = QuadratureSpec {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        max_subdivisions: 4000,
    };
    let q = integrate_adaptive(integrand, 0.0, FRAC_PI_2, &spec)?;
    Ok(2.0 / PI * q.value)
}

/// `dP_ν/dx` at x, using `(1-x²) P'_ν = (ν+1)(x P_ν - P_{ν+1})` away from
/// x = 1 and the series `ν(ν+1)/2 · F(1-ν, ν+2; 2; z)` near it.
pub fn legendre_p_derivative(nu: f64, x: f64) -> Result<f64> {
    check_degree(nu, x)?;
    let z = 0.5 * (1.0 - x);
    if let Some((sum, largest)) = gauss_series(1.0 - nu, nu + 2.0, 2.0, z) {
        if largest <= CONDITION_LIMIT * sum.abs().max(1e-3) {
            return Ok(0.5 * nu * (nu + 1.0) * sum);
        }
    }
    let p = legendre_p(nu, x)?;
    let p_next = legendre_p(nu + 1.0, x)?;
    Ok((nu + 1.0) * (x * p - p_next) / (1.0 - x * x))
}

/// `e^{-x} M(a, b, x)` for 0 ≤ a ≤ b and x ≥ 0, summed as a positive series
/// in log space. Equals `M(b - a, b, -x)` by Kummer's transformation.
pub fn kummer_m_scaled(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a >= 0.0) || !(b > 0.0) || !(x >= 0.0) || a > b || !x.is_finite() {
        return Err(Error::Domain(format!("kummer_m_scaled needs 0 <= a <= b, b > 0, x >= 0; got a = {a}, b = {b}, x = {x}")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    // Work with terms relative to exp(-x); they rise to a peak near k ≈ x a/b.
    let mut log_term = -x;
    let mut sum = 0.0f64;
    let mut k = 0.0f64;
    let mut peak = f64::NEG_INFINITY;
    loop {
        let t = log_term.exp();
        sum += t;
        peak = peak.max(log_term);
        let ratio = (a + k) / (b + k) * x / (k + 1.0);
        if ratio == 0.0 {
            break;
        }
        log_term += ratio.ln();
        k += 1.0;
        if ratio < 1.0 && log_term < peak - 40.0 && log_term.exp() < 1e-17 * sum {
            break;
        }
        if k > 10.0 * x + 1e4 {
            return Err(Error::SeriesNotConverged {
                terms: k as usize,
                bound: log_term.exp(),
            });
        }
    }
    Ok(sum)
}
