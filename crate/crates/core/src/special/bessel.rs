//! Modified Bessel function of the first kind, I_ν(z), real ν ≥ 0 and z ≥ 0.
//!
//! The ascending series has only positive terms, so it is summed without
//! cancellation for any argument; the running sum is rescaled to keep it
//! finite. For z > 30 + ν the Hankel expansion of e^{-z} I_ν(z) is tried
//! first and used when its terms fall below 1e-16 of the sum before they
//! start to grow; otherwise the series is used.

use super::gamma::ln_gamma_unchecked;
use crate::error::{Error, Result};

const SERIES_LIMIT_OFFSET: f64 = 30.0;
const RESCALE: f64 = 1e280;

fn check(nu: f64, z: f64) -> Result<()> {
    if !(nu >= 0.0) || !(z >= 0.0) || !nu.is_finite() || !z.is_finite() {
        return Err(Error::Domain(format!("bessel_i needs nu >= 0 and z >= 0, got nu = {nu}, z = {z}")));
    }
    Ok(())
}

/// ln I_ν(z) by the ascending series. Requires z > 0.
fn ln_series(nu: f64, z: f64) -> f64 {
    let q = 0.25 * z * z;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut log_scale = 0.0f64;
    let mut k = 0.0f64;
    loop {
        k += 1.0;
        term *= q / (k * (k + nu));
        sum += term;
        if sum > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            log_scale += RESCALE.ln();
        }
        // terms decrease once k(k + ν) > z²/4
        if k * (k + nu) > q && term < 1e-17 * sum {
            break;
        }
    }
    nu * (0.5 * z).ln() - ln_gamma_unchecked(nu + 1.0) + sum.ln() + log_scale
}

/// e^{-z} I_ν(z) by the Hankel expansion, or None if it does not reach
/// full precision before its terms start to grow.
fn scaled_hankel(nu: f64, z: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut k = 0.0f64;
    loop {
        k += 1.0;
        let odd = 2.0 * k - 1.0;
        let next = -term * (mu - odd * odd) / (8.0 * k * z);
        if next.abs() > term.abs() {
            return None;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-16 * sum.abs() {
            break;
        }
        if k > 200.0 {
            return None;
        }
    }
    Some(sum / (2.0 * std::f64::consts::PI * z).sqrt())
}

/// ln I_ν(z); `-inf` at z = 0 for ν > 0.
pub fn ln_bessel_i(nu: f64, z: f64) -> Result<f64> {
    check(nu, z)?;
    if z == 0.0 {
        return Ok(if nu == 0.0 { 0.0 } else { f64::NEG_INFINITY });
    }
    if z > SERIES_LIMIT_OFFSET + nu {
        if let Some(s) = scaled_hankel(nu, z) {
            return Ok(z + s.ln());
        }
    }
    Ok(ln_series(nu, z))
}

/// e^{-z} I_ν(z), finite for all admissible arguments.
pub fn bessel_i_scaled(nu: f64, z: f64) -> Result<f64> {
    check(nu, z)?;
    if z == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if z > SERIES_LIMIT_OFFSET + nu {
        if let Some(s) = scaled_hankel(nu, z) {
            return Ok(s);
        }
    }
    Ok((ln_series(nu, z) - z).exp())
}

/// I_ν(z). Returns [`Error::Overflow`] when the value exceeds f64 range;
/// use [`bessel_i_scaled`] or [`ln_bessel_i`] there.
pub fn bessel_i(nu: f64, z: f64) -> Result<f64> {
    let ln = ln_bessel_i(nu, z)?;
    let v = ln.exp();
    if v.is_infinite() {
        return Err(Error::Overflow(format!("I_{nu}({z}) = exp({ln})")));
    }
    Ok(v)
}
