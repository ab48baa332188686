//! Random-walk samplers for Brownian exits and their iterated composition.
//!
//! Each step adds a centered Gaussian vector with independent coordinates
//! of standard deviation σ and advances the clock by σ². With
//! [`StepControl::Fixed`] σ = √h throughout. With [`StepControl::Adaptive`]
//! σ = κ·max(d, √h), where d is the distance to the boundary: far from the
//! boundary the steps grow with d, so paths that wander far (the typical
//! case when p₁ ≤ 2) cost logarithmically many steps, while within √h of
//! the boundary the walk is a fixed-step walk with variance κ²h. Increments
//! are exact Brownian increments in both modes; the only error is the
//! missed boundary crossing between steps, which pushes the effective
//! boundary outward by about 0.58σ near the boundary.
//!
//! The first step that lands outside is cut back to the boundary crossing
//! on the segment, and the clock is interpolated linearly.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bm::check_positive;
use crate::cone::{ConeFamily, PolarPoint};
use crate::error::{Error, Result};

const CROSSING_BISECTIONS: usize = 60;
pub const DEFAULT_KAPPA: f64 = 0.2;
pub const DEFAULT_MAX_STEPS: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum StepControl {
    /// σ = √h.
    Fixed,
    /// σ = κ·max(d, √h).
    Adaptive { kappa: f64 },
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl::Adaptive { kappa: DEFAULT_KAPPA }
    }
}

/// Step size, step rule and per-path step budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub h: f64,
    pub step: StepControl,
    pub max_steps: u64,
}

impl SamplerConfig {
    pub fn new(h: f64) -> Result<Self> {
        check_positive(h, "step size h")?;
        Ok(Self {
            h,
            step: StepControl::default(),
            max_steps: DEFAULT_MAX_STEPS,
        })
    }

    pub fn with_step(mut self, step: StepControl) -> Result<Self> {
        if let StepControl::Adaptive { kappa } = step {
            if !(kappa > 0.0 && kappa <= 1.0) {
                return Err(Error::Domain(format!("kappa must lie in (0, 1], got {kappa}")));
            }
        }
        self.step = step;
        Ok(self)
    }

    pub fn with_max_steps(mut self, max_steps: u64) -> Result<Self> {
        if max_steps == 0 {
            return Err(Error::Domain("step budget must be positive".into()));
        }
        self.max_steps = max_steps;
        Ok(self)
    }

    fn sigma(&self, distance: f64) -> f64 {
        let floor = self.h.sqrt();
        match self.step {
            StepControl::Fixed => floor,
            StepControl::Adaptive { kappa } => kappa * distance.max(floor),
        }
    }
}

/// Angular position of a Cartesian point relative to the cone: radius and
/// the signed angle to the boundary of the generating domain (positive
/// inside).
fn angular_gap(cone: &ConeFamily, x: &[f64]) -> (f64, f64) {
    match *cone {
        ConeFamily::Wedge2D { aperture, .. } => {
            let r = x[0].hypot(x[1]);
            let mut phi = x[1].atan2(x[0]);
            if phi < 0.0 {
                phi += 2.0 * PI;
            }
            if phi > aperture {
                // outside: negative distance in angle to the nearer ray
                return (r, -(phi - aperture).min(2.0 * PI - phi));
            }
            (r, phi.min(aperture - phi))
        }
        _ => {
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let axis = x[x.len() - 1];
            let theta = (axis / r).clamp(-1.0, 1.0).acos();
            (r, cone.angular_extent() - theta)
        }
    }
}

fn inside(cone: &ConeFamily, x: &[f64]) -> bool {
    angular_gap(cone, x).1 > 0.0
}

fn boundary_distance(cone: &ConeFamily, x: &[f64]) -> f64 {
    let (r, gap) = angular_gap(cone, x);
    if gap >= 0.5 * PI {
        r
    } else {
        r * gap.sin()
    }
}

/// Coordinate of a boundary point: the polar angle of the exit ray (0 or a)
/// for wedges, the azimuth about the axis in (-π, π] otherwise.
fn boundary_coordinate(cone: &ConeFamily, x: &[f64]) -> f64 {
    match *cone {
        ConeFamily::Wedge2D { aperture, .. } => {
            let phi = x[1].atan2(x[0]);
            let to_first = phi.abs();
            let to_second = (phi - aperture).abs().min((phi - aperture + 2.0 * PI).abs());
            if to_first <= to_second {
                0.0
            } else {
                aperture
            }
        }
        _ => x[1].atan2(x[0]),
    }
}

/// A Brownian exit: time, Cartesian exit point and derived coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct BmExit {
    pub time: f64,
    pub point: Vec<f64>,
    pub radius: f64,
    pub boundary_coord: f64,
    pub steps: u64,
}

/// Walks from x until the first exit from the cone.
pub fn sample_bm_exit<R: Rng + ?Sized>(
    cone: &ConeFamily,
    x: &PolarPoint,
    config: &SamplerConfig,
    rng: &mut R,
) -> Result<BmExit> {
    let start = cone.interior_point(x.rho, x.theta)?;
    let mut pos = cone.to_cartesian(&start);
    let mut next = pos.clone();
    let mut time = 0.0;
    let mut steps = 0u64;
    loop {
        if steps >= config.max_steps {
            return Err(Error::StepBudget(config.max_steps));
        }
        steps += 1;
        let sigma = config.sigma(boundary_distance(cone, &pos));
        for (n, p) in next.iter_mut().zip(&pos) {
            let z: f64 = rng.sample(StandardNormal);
            *n = p + sigma * z;
        }
        if inside(cone, &next) {
            std::mem::swap(&mut pos, &mut next);
            time += sigma * sigma;
            continue;
        }
        // bisect for the crossing on the segment pos → next
        let (mut lo, mut hi) = (0.0, 1.0);
        let mut probe = pos.clone();
        for _ in 0..CROSSING_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            for ((q, a), b) in probe.iter_mut().zip(&pos).zip(&next) {
                *q = a + mid * (b - a);
            }
            if inside(cone, &probe) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        for ((q, a), b) in probe.iter_mut().zip(&pos).zip(&next) {
            *q = a + hi * (b - a);
        }
        time += hi * sigma * sigma;
        let radius = probe.iter().map(|v| v * v).sum::<f64>().sqrt();
        let boundary_coord = boundary_coordinate(cone, &probe);
        return Ok(BmExit {
            time,
            point: probe,
            radius,
            boundary_coord,
            steps,
        });
    }
}

/// Which of the two Brownian paths carries the exit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The clock left through -τ⁻.
    Minus,
    /// The clock left through τ⁺.
    Plus,
}

/// Side on which the clock started at 0 leaves (-τ⁻, τ⁺), decided by a
/// uniform draw u: the minus side has probability τ⁺/(τ⁻ + τ⁺).
pub fn select_side(tau_minus: f64, tau_plus: f64, u: f64) -> Side {
    if u * (tau_minus + tau_plus) < tau_plus {
        Side::Minus
    } else {
        Side::Plus
    }
}

/// An exit of iterated Brownian motion assembled from two Brownian exits.
#[derive(Debug, Clone, PartialEq)]
pub struct IbmExit {
    pub side: Side,
    pub tau_minus: f64,
    pub tau_plus: f64,
    pub exit: BmExit,
}

/// Draws `(τ⁻, W⁻)` and `(τ⁺, W⁺)` independently and keeps the exit of the
/// side the clock leaves through. Exact in law given exact Brownian exits.
pub fn sample_ibm_exit<R: Rng + ?Sized>(
    cone: &ConeFamily,
    z: &PolarPoint,
    config: &SamplerConfig,
    rng: &mut R,
) -> Result<IbmExit> {
    let minus = sample_bm_exit(cone, z, config, rng)?;
    let plus = sample_bm_exit(cone, z, config, rng)?;
    let u: f64 = rng.random();
    let side = select_side(minus.time, plus.time, u);
    let (tau_minus, tau_plus) = (minus.time, plus.time);
    let exit = match side {
        Side::Minus => minus,
        Side::Plus => plus,
    };
    Ok(IbmExit {
        side,
        tau_minus,
        tau_plus,
        exit,
    })
}

/// Exit time of a one-dimensional walk from 0 out of (-u, v), with the same
/// step rule as the spatial walks.
pub fn sample_clock_exit<R: Rng + ?Sized>(u: f64, v: f64, config: &SamplerConfig, rng: &mut R) -> Result<(f64, Side)> {
    check_positive(u, "interval end")?;
    check_positive(v, "interval end")?;
    let mut y = 0.0f64;
    let mut time = 0.0;
    let mut steps = 0u64;
    loop {
        if steps >= config.max_steps {
            return Err(Error::StepBudget(config.max_steps));
        }
        steps += 1;
        let sigma = config.sigma((y + u).min(v - y));
        let z: f64 = rng.sample(StandardNormal);
        let next = y + sigma * z;
        if next <= -u {
            time += (y + u) / (y - next) * sigma * sigma;
            return Ok((time, Side::Minus));
        }
        if next >= v {
            time += (v - y) / (next - y) * sigma * sigma;
            return Ok((time, Side::Plus));
        }
        y = next;
        time += sigma * sigma;
    }
}

/// Exit time of iterated Brownian motion: the exit time of the clock from
/// (-τ⁻, τ⁺) for two independent Brownian exit times τ±.
pub fn sample_ibm_exit_time<R: Rng + ?Sized>(
    cone: &ConeFamily,
    z: &PolarPoint,
    config: &SamplerConfig,
    rng: &mut R,
) -> Result<f64> {
    let minus = sample_bm_exit(cone, z, config, rng)?;
    let plus = sample_bm_exit(cone, z, config, rng)?;
    Ok(sample_clock_exit(minus.time, plus.time, config, rng)?.0)
}
