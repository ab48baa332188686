//! Survival function `P_x(τ > t)` and mean exit time.
//!
//! Integrating the heat-kernel series over the cone, the angular integral
//! of m_j gives D_j and the radial integral of each term is a confluent
//! hypergeometric function:
//!
//! ```text
//! P_x(τ > t) = Σ_j D_j m_j(θ) u^{p_j/2} Γ((p_j+n)/2) / Γ(p_j+n/2) · e^{-u} M((p_j+n)/2, p_j+n/2, u),
//! u = ρ²/(2t).
//! ```

use crate::cone::{PolarPoint, SpectralData};
use crate::error::Result;
use crate::special::{integrate_pieces_fallible, kummer_m_scaled, log_gamma, QuadratureSpec};

use super::kernel::{check_interior, check_positive};
use super::series::sum_modes;

/// `exp(-40)` bounds the mass that can leave a ball of radius d within the
/// times where the survival function is reported as exactly 1.
const SHORT_TIME_EXPONENT: f64 = 40.0;

/// Times up to which the survival function is reported as exactly 1.
pub(crate) fn short_time_limit(spec: &SpectralData, x: &PolarPoint) -> f64 {
    let d = spec.cone.boundary_distance(x);
    let n = spec.dimension() as f64;
    d * d / (2.0 * n * SHORT_TIME_EXPONENT)
}

fn radial_factor(p: f64, n: f64, u: f64) -> Result<f64> {
    let a = 0.5 * (p + n);
    let b = p + 0.5 * n;
    let ln = 0.5 * p * u.ln() + log_gamma(a)? - log_gamma(b)?;
    Ok(ln.exp() * kummer_m_scaled(a, b, u)?)
}

/// `P_x(τ > t)`.
pub fn survival(spec: &SpectralData, x: &PolarPoint, t: f64, tol: f64) -> Result<f64> {
    check_positive(t, "time")?;
    check_positive(tol, "tolerance")?;
    check_interior(spec, x)?;
    if t <= short_time_limit(spec, x) {
        return Ok(1.0);
    }
    let n = spec.dimension() as f64;
    let u = x.rho * x.rho / (2.0 * t);
    let sum = sum_modes(
        &spec.modes,
        tol,
        |m| radial_factor(m.p, n, u),
        |m| m.interior_functional * m.value(x.theta),
        |m| m.interior_functional.abs() * m.sup_norm(),
    )?;
    Ok(sum.clamp(0.0, 1.0))
}

/// `C(x)` in `P_x(τ > t) ~ C(x) t^{-p₁/2}`:
/// `(ρ²/2)^{p₁/2} Γ((p₁+n)/2) / Γ(p₁+n/2) · D₁ m₁(θ)`.
pub fn survival_asymptote(spec: &SpectralData, x: &PolarPoint) -> Result<f64> {
    check_interior(spec, x)?;
    let m1 = spec.first();
    let n = spec.dimension() as f64;
    let ln = 0.5 * m1.p * (0.5 * x.rho * x.rho).ln() + log_gamma(0.5 * (m1.p + n))? - log_gamma(m1.p + 0.5 * n)?;
    Ok(ln.exp() * m1.interior_functional * m1.value(x.theta))
}

/// `E_x τ`: quadrature of the survival function up to `T* = 10⁴ρ²` plus
/// the integral of `C(x) t^{-p₁/2}` beyond. Infinite when `p₁ ≤ 2`.
pub fn mean_exit_time(spec: &SpectralData, x: &PolarPoint, tol: f64) -> Result<f64> {
    check_interior(spec, x)?;
    let p1 = spec.p1();
    if p1 <= 2.0 + 1e-12 {
        return Ok(f64::INFINITY);
    }
    let t0 = short_time_limit(spec, x);
    let t_star = 1e4 * x.rho * x.rho;
    let mut breaks = vec![t0];
    let mut b = 4.0 * t0;
    while b < t_star {
        breaks.push(b);
        b *= 4.0;
    }
    breaks.push(t_star);
    let spec_q = QuadratureSpec {
        abs_tol: 1e-14 * x.rho * x.rho,
        rel_tol: tol.max(1e-12),
        max_subdivisions: 1000,
    };
    let body = integrate_pieces_fallible(|t| survival(spec, x, t, tol), &breaks, &spec_q)?;
    let c = survival_asymptote(spec, x)?;
    let completion = c * t_star.powf(1.0 - 0.5 * p1) / (0.5 * p1 - 1.0);
    Ok(t0 + body.value + completion)
}

/// Survival function of Brownian motion started at x.
#[derive(Debug, Clone)]
pub struct SurvivalCurve {
    spec: SpectralData,
    start: PolarPoint,
    tol: f64,
    constant: f64,
}

impl SurvivalCurve {
    pub fn new(spec: SpectralData, start: PolarPoint, tol: f64) -> Result<Self> {
        check_positive(tol, "tolerance")?;
        let constant = survival_asymptote(&spec, &start)?;
        Ok(Self {
            spec,
            start,
            tol,
            constant,
        })
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        survival(&self.spec, &self.start, t, self.tol)
    }

    /// `C(x)`.
    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// `p₁/2`.
    pub fn exponent(&self) -> f64 {
        0.5 * self.spec.p1()
    }

    pub fn asymptotic(&self, t: f64) -> f64 {
        self.constant * t.powf(-self.exponent())
    }

    pub fn spectral_data(&self) -> &SpectralData {
        &self.spec
    }

    pub fn start(&self) -> PolarPoint {
        self.start
    }
}
