//! Truncation control shared by the spectral series.

use crate::cone::Mode;
use crate::error::{Error, Result};

/// Relative size below which cancellation makes further accuracy meaningless.
const CANCELLATION_FLOOR: f64 = 1e-13;
const SMALL_RUN: usize = 3;

/// Sums `Σ_j weight(mode_j) · coef(mode_j)` over the available modes.
///
/// `envelope(mode)` bounds `|coef|` from above up to a mode-independent
/// factor; a running maximum of it times the weight bounds each remaining
/// term. Summation stops once three consecutive bounds, together with the
/// geometric remainder they imply, fall below `tol·|sum|`.
pub(crate) fn sum_modes<W, C, E>(modes: &[Mode], tol: f64, mut weight: W, coef: C, envelope: E) -> Result<f64>
where
    W: FnMut(&Mode) -> Result<f64>,
    C: Fn(&Mode) -> f64,
    E: Fn(&Mode) -> f64,
{
    let mut sum = 0.0f64;
    let mut largest = 0.0f64;
    let mut env_coef = 0.0f64;
    let mut prev_bound = f64::INFINITY;
    let mut run = 0;
    let mut bound = f64::INFINITY;
    for mode in modes {
        let w = weight(mode)?;
        let c = coef(mode);
        let term = w * c;
        sum += term;
        largest = largest.max(term.abs());
        env_coef = env_coef.max(envelope(mode)).max(c.abs());
        bound = w.abs() * env_coef;
        let ratio = bound / prev_bound;
        let remainder = if ratio < 1.0 { bound * ratio / (1.0 - ratio) } else { f64::INFINITY };
        let scale = sum.abs().max(CANCELLATION_FLOOR * largest);
        if bound <= tol * scale && remainder <= tol * scale {
            run += 1;
            if run >= SMALL_RUN {
                return Ok(sum);
            }
        } else if bound == 0.0 && sum == 0.0 {
            run += 1;
            if run >= SMALL_RUN {
                return Ok(0.0);
            }
        } else {
            run = 0;
        }
        prev_bound = bound;
    }
    Err(Error::SeriesNotConverged {
        terms: modes.len(),
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{spectrum, BoundaryWeight, ConeFamily};

    #[test]
    fn geometric_series() {
        let s = spectrum(&ConeFamily::wedge(1.0).unwrap(), 200, BoundaryWeight::Geometric).unwrap();
        let v = sum_modes(&s.modes, 1e-14, |m| Ok(0.5f64.powi(m.index as i32)), |_| 1.0, |_| 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
    }

    #[test]
    fn exhausted_modes_reported() {
        let s = spectrum(&ConeFamily::wedge(1.0).unwrap(), 5, BoundaryWeight::Geometric).unwrap();
        let e = sum_modes(&s.modes, 1e-14, |_| Ok(1.0), |_| 1.0, |_| 1.0).unwrap_err();
        assert!(matches!(e, Error::SeriesNotConverged { terms: 5, .. }));
    }
}
