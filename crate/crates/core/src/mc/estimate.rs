//! Tail-exponent fits and Kolmogorov–Smirnov distances for sample batches.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Samples above `r_min` needed before a fit is attempted.
pub const MIN_TAIL_SAMPLES: usize = 100;
const BATCHES: usize = 10;

/// Least-squares power-law fit of an empirical survival function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    /// Slope of `ln P(X > r)` against `ln r`.
    pub slope: f64,
    /// Batch-means standard error of the slope.
    pub stderr: f64,
    /// Slopes fitted separately on the lower and upper halves of the grid.
    pub slope_low: f64,
    pub slope_high: f64,
    /// The two half-range slopes disagree by more than a quarter of the
    /// slope plus three standard errors.
    pub non_power_law: bool,
    /// Samples above `r_min`.
    pub tail_count: usize,
}

/// Half-dyadic grid from `r_min` to `r_max`, both included.
fn grid(r_min: f64, r_max: f64) -> Vec<f64> {
    let steps = (2.0 * (r_max / r_min).log2()).ceil().max(1.0) as usize;
    (0..=steps)
        .map(|k| r_min * (r_max / r_min).powf(k as f64 / steps as f64))
        .collect()
}

fn ols_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `(ln r, ln S(r))` at the grid points where the empirical survival is
/// positive; `sorted` must be ascending.
fn log_survival(sorted: &[f64], grid: &[f64]) -> Vec<(f64, f64)> {
    let n = sorted.len() as f64;
    grid.iter()
        .filter_map(|&r| {
            let above = sorted.len() - sorted.partition_point(|&x| x <= r);
            (above > 0).then(|| (r.ln(), (above as f64 / n).ln()))
        })
        .collect()
}

fn sorted_copy(samples: &[f64]) -> Vec<f64> {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Fits `P(X > r) ∝ r^{slope}` on `[r_min, r_max]`.
pub fn estimate_tail_exponent(samples: &[f64], r_min: f64, r_max: f64) -> Result<TailFit> {
    if !(r_min > 0.0) || !r_max.is_finite() {
        return Err(Error::Domain(format!("need 0 < r_min < r_max < ∞, got [{r_min}, {r_max}]")));
    }
    if !(r_max / r_min >= 4.0) {
        return Err(Error::Domain(format!("fit range [{r_min}, {r_max}] spans less than a factor 4")));
    }
    let tail_count = samples.iter().filter(|&&x| x > r_min).count();
    if tail_count < MIN_TAIL_SAMPLES {
        return Err(Error::InsufficientTailData(format!(
            "{tail_count} of {} samples exceed {r_min}; at least {MIN_TAIL_SAMPLES} needed",
            samples.len()
        )));
    }
    let grid = grid(r_min, r_max);
    let sorted = sorted_copy(samples);
    let points = log_survival(&sorted, &grid);
    let slope = ols_slope(&points)
        .ok_or_else(|| Error::InsufficientTailData("fewer than two grid points with tail mass".into()))?;

    let mid = grid.len() / 2;
    let low = log_survival(&sorted, &grid[..=mid]);
    let high = log_survival(&sorted, &grid[mid..]);
    let slope_low = ols_slope(&low).unwrap_or(f64::NAN);
    let slope_high = ols_slope(&high).unwrap_or(f64::NAN);

    // interleaved batches stay comparable even when the input is ordered
    let batch_slopes: Vec<f64> = (0..BATCHES)
        .filter_map(|b| {
            let batch: Vec<f64> = samples.iter().skip(b).step_by(BATCHES).copied().collect();
            let batch = sorted_copy(&batch);
            ols_slope(&log_survival(&batch, &grid))
        })
        .collect();
    let stderr = if batch_slopes.len() >= 2 {
        let k = batch_slopes.len() as f64;
        let mean = batch_slopes.iter().sum::<f64>() / k;
        let var = batch_slopes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (k - 1.0);
        (var / k).sqrt()
    } else {
        f64::INFINITY
    };
    let disagreement = (slope_low - slope_high).abs();
    let non_power_law = !(disagreement <= 0.25 * slope.abs() + 3.0 * stderr);
    Ok(TailFit {
        slope,
        stderr,
        slope_low,
        slope_high,
        non_power_law,
        tail_count,
    })
}

/// `sup_x |F_N(x) - F(x)|` for the empirical distribution of `samples`.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Domain("KS distance of an empty sample".into()));
    }
    let sorted = sorted_copy(samples);
    let n = sorted.len() as f64;
    Ok(sorted.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = cdf(x);
        d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n)
    }))
}

/// Critical value of the KS statistic at level 1% for n samples.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::RngSpec;
    use rand::Rng;

    fn pareto(n: usize, alpha: f64, seed: u64) -> Vec<f64> {
        let mut rng = RngSpec::new(seed, 0).rng();
        (0..n).map(|_| (1.0 - rng.random::<f64>()).powf(-1.0 / alpha)).collect()
    }

    #[test]
    fn pareto_slope() {
        let x = pareto(1_000_000, 3.0, 5);
        let fit = estimate_tail_exponent(&x, 2.0, 16.0).unwrap();
        assert!((fit.slope + 3.0).abs() < 0.1, "{fit:?}");
        assert!(fit.stderr < 0.05);
        assert!(!fit.non_power_law);
    }

    #[test]
    fn exponential_flagged() {
        let mut rng = RngSpec::new(6, 0).rng();
        let x: Vec<f64> = (0..1_000_000).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let fit = estimate_tail_exponent(&x, 1.0, 8.0).unwrap();
        assert!(fit.non_power_law, "{fit:?}");
        assert!(fit.slope_high < fit.slope_low);
    }

    #[test]
    fn scale_invariant() {
        let x = pareto(100_000, 2.0, 7);
        let y: Vec<f64> = x.iter().map(|v| 3.7 * v).collect();
        let a = estimate_tail_exponent(&x, 2.0, 20.0).unwrap();
        let b = estimate_tail_exponent(&y, 7.4, 74.0).unwrap();
        assert!((a.slope - b.slope).abs() < 1e-9);
    }

    #[test]
    fn stderr_independent_of_input_order() {
        let x = pareto(100_000, 2.0, 10);
        let sorted = sorted_copy(&x);
        let a = estimate_tail_exponent(&x, 2.0, 20.0).unwrap();
        let b = estimate_tail_exponent(&sorted, 2.0, 20.0).unwrap();
        assert_eq!(a.slope, b.slope);
        assert!(b.stderr.is_finite() && b.stderr < 3.0 * a.stderr + 0.01, "{a:?} {b:?}");
    }

    #[test]
    fn fit_preconditions() {
        let x = pareto(1000, 3.0, 8);
        assert!(matches!(estimate_tail_exponent(&x, 2.0, 7.9), Err(Error::Domain(_))));
        assert!(matches!(estimate_tail_exponent(&x, 50.0, 400.0), Err(Error::InsufficientTailData(_))));
    }

    #[test]
    fn ks_examples() {
        assert_eq!(ks_distance(&[0.3, 0.9], |_| 0.0).unwrap(), 1.0);
        assert!(ks_distance(&[], |x| x).is_err());
        let mut rng = RngSpec::new(9, 0).rng();
        let n = 10_000;
        let mut passes = 0;
        for _ in 0..50 {
            let u: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            if ks_distance(&u, |x| x.clamp(0.0, 1.0)).unwrap() < ks_critical_1pct(n) {
                passes += 1;
            }
        }
        assert!(passes >= 47, "{passes}");
    }
}
