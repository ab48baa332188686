//! Law of |B_τ|, the distance from the vertex at which Brownian motion
//! leaves the cone.
//!
//! With `γ = 2ρr/(ρ² + r²)` the series ratio `q = γ/(1 + √(1-γ²))` equals
//! `min(r/ρ, ρ/r)`, which is how it is evaluated here: it avoids the
//! cancellation in `1 - γ²` near the diagonal.

use serde::{Deserialize, Serialize};

use crate::cone::{PolarPoint, SpectralData};
use crate::error::{Error, Result};
use crate::special::{integrate_pieces_fallible, QuadratureSpec};

use super::kernel::{check_interior, check_positive, flux_time_integral};
use super::series::sum_modes;

/// Series evaluation is refused when γ exceeds `1 - DEFAULT_EPS_MIN`.
pub const DEFAULT_EPS_MIN: f64 = 1e-3;

/// Power-law description of a tail: `constant · r^{-exponent}`, times `ln r`
/// when `log_correction` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailAsymptote {
    pub constant: f64,
    pub exponent: f64,
    pub log_correction: bool,
}

impl TailAsymptote {
    pub fn eval(&self, r: f64) -> f64 {
        let v = self.constant * r.powf(-self.exponent);
        if self.log_correction {
            v * r.ln()
        } else {
            v
        }
    }
}

pub(crate) fn similarity(rho: f64, r: f64) -> (f64, f64) {
    let gamma = 2.0 * rho * r / (rho * rho + r * r);
    let q = (r / rho).min(rho / r);
    (gamma, q)
}

pub(crate) fn radial_prefactor(spec: &SpectralData, rho: f64, r: f64) -> f64 {
    let h = 0.5 * spec.dimension() as f64;
    r.powf(h - 2.0) * rho.powf(1.0 - h)
}

fn series_density(spec: &SpectralData, x: &PolarPoint, r: f64, tol: f64, eps_min: f64) -> Result<f64> {
    check_positive(r, "radius")?;
    check_positive(tol, "tolerance")?;
    check_interior(spec, x)?;
    let (gamma, q) = similarity(x.rho, r);
    if gamma > 1.0 - eps_min {
        return Err(Error::NearDiagonal { gamma, eps: eps_min });
    }
    let ln_q = q.ln();
    let sum = sum_modes(
        &spec.modes,
        tol,
        |m| Ok((m.alpha * ln_q).exp() / m.alpha),
        |m| m.boundary_functional * m.value(x.theta),
        |m| m.boundary_functional.abs() * m.sup_norm(),
    )?;
    Ok((0.5 * radial_prefactor(spec, x.rho, r) * sum).max(0.0))
}

/// Density of |B_τ| at r from the Bessel–Laplace series. Refused with
/// [`Error::NearDiagonal`] when γ > 1 - [`DEFAULT_EPS_MIN`].
pub fn exit_radial_density(spec: &SpectralData, x: &PolarPoint, r: f64, tol: f64) -> Result<f64> {
    series_density(spec, x, r, tol, DEFAULT_EPS_MIN)
}

/// Density of |B_τ| at r from the time integral of the boundary flux. Valid
/// for every r > 0, including r = ρ; slower than the series.
pub fn exit_radial_density_bridged(spec: &SpectralData, x: &PolarPoint, r: f64, tol: f64) -> Result<f64> {
    check_positive(r, "radius")?;
    check_positive(tol, "tolerance")?;
    check_interior(spec, x)?;
    let flux = flux_time_integral(spec, x, r, tol, |_| Ok(1.0))?;
    Ok((0.5 * radial_prefactor(spec, x.rho, r) * flux).max(0.0))
}

/// Leading behaviour `P_x(|B_τ| > r) ~ K r^{-p₁}` with
/// `K = ρ^{p₁} S₁ m₁(θ) / (2 p₁ (p₁ + n/2 - 1))`.
pub fn bm_tail_asymptote(spec: &SpectralData, x: &PolarPoint) -> Result<TailAsymptote> {
    check_interior(spec, x)?;
    let m1 = spec.first();
    let constant = x.rho.powf(m1.p) * m1.boundary_functional * m1.value(x.theta) / (2.0 * m1.p * m1.alpha);
    Ok(TailAsymptote {
        constant,
        exponent: m1.p,
        log_correction: false,
    })
}

/// `P_x(|B_τ| > r)` for r beyond the near-diagonal band: quadrature of the
/// series density on (r, R*) plus `K R*^{-p₁}` beyond
/// `R* = max(50ρ, 4r)`. R* is doubled until the asymptote matches the
/// density there to 1%.
pub fn exit_radial_tail(spec: &SpectralData, x: &PolarPoint, r: f64, tol: f64) -> Result<f64> {
    check_positive(r, "radius")?;
    check_interior(spec, x)?;
    let rho = x.rho;
    let (gamma, _) = similarity(rho, r);
    if r <= rho || gamma > 1.0 - DEFAULT_EPS_MIN {
        return Err(Error::Domain(format!(
            "tail needs r beyond the near-diagonal band above rho = {rho}, got r = {r}"
        )));
    }
    let asym = bm_tail_asymptote(spec, x)?;
    let mut r_star = (50.0 * rho).max(4.0 * r);
    for _ in 0..30 {
        let d = series_density(spec, x, r_star, tol, DEFAULT_EPS_MIN)?;
        let a = asym.constant * asym.exponent * r_star.powf(-asym.exponent - 1.0);
        if (d / a - 1.0).abs() <= 0.01 {
            break;
        }
        r_star *= 2.0;
    }
    let mut breaks = vec![r];
    let mut b = 2.0 * r;
    while b < r_star {
        breaks.push(b);
        b *= 2.0;
    }
    breaks.push(r_star);
    let spec_q = QuadratureSpec {
        abs_tol: 1e-15,
        rel_tol: tol.max(1e-12),
        max_subdivisions: 1000,
    };
    let body = integrate_pieces_fallible(|s| series_density(spec, x, s, tol, DEFAULT_EPS_MIN), &breaks, &spec_q)?;
    Ok(body.value + asym.constant * r_star.powf(-asym.exponent))
}

/// Radial exit law of Brownian motion started at x.
#[derive(Debug, Clone)]
pub struct RadialLaw {
    spec: SpectralData,
    start: PolarPoint,
    tol: f64,
    eps_min: f64,
}

impl RadialLaw {
    pub fn new(spec: SpectralData, start: PolarPoint, tol: f64) -> Result<Self> {
        check_interior(&spec, &start)?;
        check_positive(tol, "tolerance")?;
        Ok(Self {
            spec,
            start,
            tol,
            eps_min: DEFAULT_EPS_MIN,
        })
    }

    pub fn with_eps_min(mut self, eps_min: f64) -> Result<Self> {
        if !(eps_min > 0.0 && eps_min < 1.0) {
            return Err(Error::Domain(format!("eps_min must lie in (0, 1), got {eps_min}")));
        }
        self.eps_min = eps_min;
        Ok(self)
    }

    pub fn spectral_data(&self) -> &SpectralData {
        &self.spec
    }

    pub fn start(&self) -> PolarPoint {
        self.start
    }

    /// Density at r; near the diagonal, or where the truncated spectrum is
    /// too short for the series, the time-integral form is used.
    pub fn density(&self, r: f64) -> Result<f64> {
        match series_density(&self.spec, &self.start, r, self.tol, self.eps_min) {
            Err(Error::NearDiagonal { .. }) | Err(Error::SeriesNotConverged { .. }) => {
                exit_radial_density_bridged(&self.spec, &self.start, r, self.tol)
            }
            other => other,
        }
    }

    pub fn tail(&self, r: f64) -> Result<f64> {
        exit_radial_tail(&self.spec, &self.start, r, self.tol)
    }

    pub fn asymptote(&self) -> TailAsymptote {
        bm_tail_asymptote(&self.spec, &self.start).expect("start validated at construction")
    }

    /// `P(a < |B_τ| < b)` by quadrature of [`RadialLaw::density`]; `b` may
    /// be infinite.
    pub fn mass(&self, a: f64, b: f64) -> Result<f64> {
        let rho = self.start.rho;
        let mut breaks = vec![a];
        for k in [0.25, 0.5, 0.9, 0.97, 1.0, 1.03, 1.1, 2.0, 4.0] {
            let c = k * rho;
            if c > a && c < b {
                breaks.push(c);
            }
        }
        breaks.push(b);
        let spec_q = QuadratureSpec {
            abs_tol: 1e-12,
            rel_tol: (10.0 * self.tol).max(1e-10),
            max_subdivisions: 1000,
        };
        Ok(integrate_pieces_fallible(|r| self.density(r), &breaks, &spec_q)?.value)
    }
}
