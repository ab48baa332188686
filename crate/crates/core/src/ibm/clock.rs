//! Tabulated survival function of the outer Brownian motion and the clock
//! kernel `G(T) = ∫_0^∞ T/(T+v)² P_z(τ > v) dv`.
//!
//! G is what remains of the clock once the inner time integral of the
//! iterated process is done: the density of the exit radius at r involves
//! the time variable only through `G((ρ² + r²)/2s)`. Both functions are
//! stored as `ln` values on a uniform grid in `ln t` and interpolated by
//! local cubics, which is accurate because both become straight lines at
//! the power-law ends.

use crate::bm::{short_time_limit, survival};
use crate::cone::{PolarPoint, SpectralData};
use crate::error::{Error, Result};
use crate::special::{integrate_pieces_fallible, QuadratureSpec};

const POINTS_PER_DECADE: f64 = 100.0;
const SURVIVAL_TOL: f64 = 1e-12;
const KERNEL_REL_TOL: f64 = 1e-11;

/// Cubic interpolation of `ln f` against `ln t` on a uniform grid.
#[derive(Debug, Clone)]
struct LogTable {
    x0: f64,
    dx: f64,
    y: Vec<f64>,
}

impl LogTable {
    fn build<F: Fn(f64) -> Result<f64>>(t0: f64, t1: f64, f: F) -> Result<Self> {
        let x0 = t0.ln();
        let dx = std::f64::consts::LN_10 / POINTS_PER_DECADE;
        let count = ((t1.ln() - x0) / dx).ceil() as usize + 1;
        let y = (0..count)
            .map(|i| {
                let v = f((x0 + i as f64 * dx).exp())?;
                if !(v > 0.0) {
                    return Err(Error::Overflow(format!("non-positive table value {v}")));
                }
                Ok(v.ln())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { x0, dx, y })
    }

    fn eval(&self, t: f64) -> Option<f64> {
        let u = (t.ln() - self.x0) / self.dx;
        let last = self.y.len() - 1;
        if !(u >= 0.0) || u > last as f64 {
            return None;
        }
        let i = (u.floor() as usize).clamp(1, last - 2) - 1;
        let s = u - (i + 1) as f64;
        let y = &self.y[i..i + 4];
        // Lagrange weights for nodes -1, 0, 1, 2
        let w0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
        let w1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
        let w2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
        let w3 = (s + 1.0) * s * (s - 1.0) / 6.0;
        Some((w0 * y[0] + w1 * y[1] + w2 * y[2] + w3 * y[3]).exp())
    }
}

/// `P_z(τ > t)` backed by a table, with direct evaluation outside it.
#[derive(Debug, Clone)]
pub struct SurvivalTable {
    spec: SpectralData,
    start: PolarPoint,
    t0: f64,
    table: LogTable,
}

impl SurvivalTable {
    pub fn new(spec: SpectralData, start: PolarPoint) -> Result<Self> {
        let t0 = short_time_limit(&spec, &start);
        let t1 = 1e12 * start.rho * start.rho;
        let table = LogTable::build(t0, t1, |t| survival(&spec, &start, t, SURVIVAL_TOL))?;
        Ok(Self {
            spec,
            start,
            t0,
            table,
        })
    }

    /// Below this time the survival function is exactly 1.
    pub fn short_time_limit(&self) -> f64 {
        self.t0
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if t <= self.t0 {
            return Ok(1.0);
        }
        match self.table.eval(t) {
            Some(v) => Ok(v.min(1.0)),
            None => survival(&self.spec, &self.start, t, SURVIVAL_TOL),
        }
    }
}

/// The clock kernel G, tabulated.
#[derive(Debug, Clone)]
pub struct ClockKernel {
    survival: SurvivalTable,
    table: LogTable,
}

impl ClockKernel {
    pub fn new(spec: SpectralData, start: PolarPoint) -> Result<Self> {
        let survival = SurvivalTable::new(spec, start)?;
        let rho2 = start.rho * start.rho;
        let lo = 1e-3 * survival.short_time_limit();
        let table = LogTable::build(lo, 1e14 * rho2, |t| kernel_direct(&survival, t))?;
        Ok(Self { survival, table })
    }

    pub fn survival(&self) -> &SurvivalTable {
        &self.survival
    }

    /// `G(T)`; decreases from 1 at T = 0 to 0 at infinity.
    pub fn eval(&self, big_t: f64) -> Result<f64> {
        if !(big_t > 0.0) {
            return Ok(1.0);
        }
        match self.table.eval(big_t) {
            Some(v) => Ok(v.min(1.0)),
            None => kernel_direct(&self.survival, big_t),
        }
    }
}

fn kernel_direct(survival: &SurvivalTable, big_t: f64) -> Result<f64> {
    let t0 = survival.short_time_limit();
    // survival is 1 on (0, t0)
    let head = t0 / (big_t + t0);
    let mut breaks = vec![t0];
    let mut b = 4.0 * t0;
    let end = 1e4 * big_t.max(t0);
    while b < end {
        if breaks.last().is_some_and(|&last| last < big_t && big_t < b) {
            breaks.push(big_t);
        }
        breaks.push(b);
        b *= 4.0;
    }
    breaks.push(f64::INFINITY);
    let spec = QuadratureSpec {
        abs_tol: 1e-3 * KERNEL_REL_TOL * head.max(1e-300),
        rel_tol: KERNEL_REL_TOL,
        max_subdivisions: 2000,
    };
    let body = integrate_pieces_fallible(
        |v| Ok(big_t / (big_t + v).powi(2) * survival.eval(v)?),
        &breaks,
        &spec,
    )?;
    Ok(head + body.value)
}
