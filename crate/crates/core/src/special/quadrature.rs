//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol * |value|)`. Semi-infinite ranges are
//! mapped onto a finite interval first: `(a, ∞)` with `a > 0` through
//! `x = 1/t`, and `(a, ∞)` with `a ≤ 0` through `x = a + t/(1 - t)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and work limit for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1 {
            return Err(Error::Domain(format!(
                "quadrature tolerances must be positive and subdivisions >= 1 \
                 (abs {abs_tol}, rel {rel_tol}, max {max_subdivisions})"
            )));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }

    pub fn with_rel(rel_tol: f64) -> Self {
        Self {
            abs_tol: 1e-300,
            rel_tol,
            max_subdivisions: 2000,
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let abs_sum = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_sum);
    }
    (value, error)
}

fn integrate_finite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Quadrature> {
    let (value, error) = gauss_kronrod(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut subdivisions = 1;
    loop {
        let target = spec.abs_tol.max(spec.rel_tol * total.abs());
        if !total.is_finite() {
            return Err(Error::QuadratureNotConverged {
                value: total,
                error: total_err,
                subdivisions,
            });
        }
        if total_err <= target {
            return Ok(Quadrature {
                value: total,
                error: total_err,
                subdivisions,
            });
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::QuadratureNotConverged {
                value: total,
                error: total_err,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // interval exhausted at machine resolution; keep its estimate
            return Err(Error::QuadratureNotConverged {
                value: total,
                error: total_err,
                subdivisions,
            });
        }
        let (v1, e1) = gauss_kronrod(f, worst.a, mid);
        let (v2, e2) = gauss_kronrod(f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        subdivisions += 1;
        if subdivisions % 64 == 0 {
            // re-sum to shed accumulated cancellation in the running totals
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
}

/// Integrates `f` over `(a, b)`; `b` may be `f64::INFINITY`.
///
/// Endpoints are never evaluated, so integrable endpoint singularities are
/// allowed. Failure to meet the tolerance within `max_subdivisions` is an
/// error carrying the best estimate.
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    if a.is_nan() || b.is_nan() || a == f64::INFINITY || a == f64::NEG_INFINITY || b == f64::NEG_INFINITY {
        return Err(Error::Domain(format!("unsupported integration range ({a}, {b})")));
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }
    if b.is_infinite() {
        if a > 0.0 {
            let g = |t: f64| {
                let x = 1.0 / t;
                f(x) * x * x
            };
            return integrate_finite(&g, 0.0, 1.0 / a, spec);
        }
        let g = |t: f64| {
            let s = 1.0 - t;
            f(a + t / s) / (s * s)
        };
        return integrate_finite(&g, 0.0, 1.0, spec);
    }
    if b < a {
        let q = integrate_finite(&f, b, a, spec)?;
        return Ok(Quadrature {
            value: -q.value,
            ..q
        });
    }
    integrate_finite(&f, a, b, spec)
}

/// Sums adaptive integrals over consecutive pieces `breaks[i]..breaks[i+1]`,
/// splitting the tolerance budget evenly.
pub fn integrate_pieces<F>(f: F, breaks: &[f64], spec: &QuadratureSpec) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    let pieces = breaks.len().saturating_sub(1).max(1) as f64;
    let piece_spec = QuadratureSpec {
        abs_tol: spec.abs_tol / pieces,
        ..*spec
    };
    let mut out = Quadrature {
        value: 0.0,
        error: 0.0,
        subdivisions: 0,
    };
    for w in breaks.windows(2) {
        let q = integrate_adaptive(&f, w[0], w[1], &piece_spec)?;
        out.value += q.value;
        out.error += q.error;
        out.subdivisions += q.subdivisions;
    }
    Ok(out)
}

/// [`integrate_pieces`] for integrands that may fail; the first failure is
/// returned in place of the quadrature diagnostic it would otherwise cause.
pub(crate) fn integrate_pieces_fallible<F>(f: F, breaks: &[f64], spec: &QuadratureSpec) -> Result<Quadrature>
where
    F: Fn(f64) -> Result<f64>,
{
    let failure = std::cell::RefCell::new(None);
    let g = |x: f64| match f(x) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let out = integrate_pieces(g, breaks, spec);
    match failure.into_inner() {
        Some(e) => Err(e),
        None => out,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_on_unit_interval() {
        let q = integrate_adaptive(|_| 1.0, 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exponential_half_line() {
        let q = integrate_adaptive(|w: f64| (-w).exp(), 0.0, f64::INFINITY, &QuadratureSpec::default()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-12);
        let q = integrate_adaptive(|w: f64| (-w).exp(), 2.0, f64::INFINITY, &QuadratureSpec::default()).unwrap();
        assert!((q.value - (-2f64).exp()).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        let spec = QuadratureSpec::new(1e-13, 1e-11, 2000).unwrap();
        let q = integrate_adaptive(|x: f64| x.powf(-0.75), 0.0, 1.0, &spec).unwrap();
        assert!((q.value - 4.0).abs() < 1e-9, "{}", q.value);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let q = integrate_adaptive(|x: f64| x * x, 1.0, 0.0, &QuadratureSpec::default()).unwrap();
        assert!((q.value + 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn non_convergence_is_reported() {
        let spec = QuadratureSpec::new(1e-14, 1e-14, 3).unwrap();
        let err = integrate_adaptive(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &spec).unwrap_err();
        assert!(matches!(err, Error::QuadratureNotConverged { .. }));
    }

    #[test]
    fn rejects_bad_spec() {
        assert!(QuadratureSpec::new(0.0, 1e-9, 10).is_err());
        assert!(QuadratureSpec::new(1e-9, 1e-9, 0).is_err());
    }
}
