//! Dirichlet heat kernel of the cone and the joint law of (τ, B_τ).
//!
//! For the three-dimensional families only axisymmetric modes are summed,
//! so the kernel returned is the average over rotations of `y` about the
//! axis. It coincides with the full kernel when `x` is on the axis.

use crate::cone::{PolarPoint, SpectralData};
use crate::error::{Error, Result};
use crate::special::{bessel_i_scaled, integrate_pieces_fallible, QuadratureSpec};

use super::series::sum_modes;

/// Both densities are dominated by a Gaussian in |ρ - r|; beyond this
/// exponent they are below the smallest normal double.
const NEGLIGIBLE_EXPONENT: f64 = 745.0;

pub(crate) fn check_positive(value: f64, what: &str) -> Result<()> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::Domain(format!("{what} must be positive and finite, got {value}")));
    }
    Ok(())
}

pub(crate) fn check_interior(spec: &SpectralData, p: &PolarPoint) -> Result<()> {
    spec.cone.interior_point(p.rho, p.theta).map(|_| ())
}

/// `p_C(t, x, y)` by the Bessel eigenfunction expansion.
pub fn heat_kernel(spec: &SpectralData, t: f64, x: &PolarPoint, y: &PolarPoint, tol: f64) -> Result<f64> {
    check_positive(t, "time")?;
    check_positive(tol, "tolerance")?;
    check_interior(spec, x)?;
    check_interior(spec, y)?;
    let (rho, r) = (x.rho, y.rho);
    if (rho - r).powi(2) / (2.0 * t) > NEGLIGIBLE_EXPONENT {
        return Ok(0.0);
    }
    let z = rho * r / t;
    let sum = sum_modes(
        &spec.modes,
        tol,
        |m| bessel_i_scaled(m.alpha, z),
        |m| m.value(x.theta) * m.value(y.theta),
        |m| m.sup_norm().powi(2),
    )?;
    let prefactor = (-(rho - r).powi(2) / (2.0 * t)).exp() / t * (rho * r).powf(-spec.shift());
    // roundoff can leave tiny negative values where the kernel underflows
    Ok((prefactor * sum).max(0.0))
}

/// Density of `(τ, B_τ)` at time `t` and boundary point `y`, with respect to
/// `σ(dy) dt` where σ is surface measure on the boundary of the cone.
pub fn joint_exit_density(spec: &SpectralData, t: f64, x: &PolarPoint, y: &PolarPoint, tol: f64) -> Result<f64> {
    check_positive(t, "time")?;
    check_positive(tol, "tolerance")?;
    check_interior(spec, x)?;
    let on_boundary = spec.cone.point(y.rho, y.theta).map(|p| spec.cone.on_boundary(&p)).unwrap_or(false);
    if !on_boundary {
        return Err(Error::InvalidPoint(format!("({}, {}) is not on the boundary", y.rho, y.theta)));
    }
    let (rho, r) = (x.rho, y.rho);
    if (rho - r).powi(2) / (2.0 * t) > NEGLIGIBLE_EXPONENT {
        return Ok(0.0);
    }
    let z = rho * r / t;
    let sum = sum_modes(
        &spec.modes,
        tol,
        |m| bessel_i_scaled(m.alpha, z),
        |m| m.value(x.theta) * m.normal_derivative(y.theta),
        |m| m.sup_norm() * m.normal_derivative(y.theta).abs(),
    )?;
    let prefactor = 0.5 / r * (-(rho - r).powi(2) / (2.0 * t)).exp() / t * (rho * r).powf(-spec.shift());
    Ok((prefactor * sum).max(0.0))
}

/// `∫_0^∞ s⁻¹ e^{-s} Σ_j I_{α_j}(γ s) S_j m_j(θ) · clock((ρ² + r²)/(2s)) ds`.
///
/// This is the boundary flux through radius r integrated over time, written
/// in the variable s = (ρ² + r²)/(2t). The radial exit density of Brownian
/// motion is `½ r^{n/2-2} ρ^{1-n/2}` times it with `clock ≡ 1`. It stays
/// finite at γ = 1: for small times the flux decays like
/// `exp(-|x - y|²/2t)`, so the range is cut where that factor drops below
/// e^{-40}.
pub(crate) fn flux_time_integral<K>(spec: &SpectralData, x: &PolarPoint, r: f64, tol: f64, clock: K) -> Result<f64>
where
    K: Fn(f64) -> Result<f64>,
{
    let rho = x.rho;
    let sum_sq = rho * rho + r * r;
    let gamma = 2.0 * rho * r / sum_sq;
    let gap = spec.cone.boundary_gap(x.theta);
    let dist_sq = (sum_sq - 2.0 * rho * r * gap.cos()).max(1e-300);
    let s_max = 40.0 * sum_sq / dist_sq;
    let integrand = |s: f64| -> Result<f64> {
        let damping = (-(1.0 - gamma) * s).exp();
        if damping == 0.0 {
            return Ok(0.0);
        }
        let flux = sum_modes(
            &spec.modes,
            1e-13,
            |m| bessel_i_scaled(m.alpha, gamma * s),
            |m| m.boundary_functional * m.value(x.theta),
            |m| m.boundary_functional.abs() * m.sup_norm(),
        )?;
        Ok(damping * flux / s * clock(sum_sq / (2.0 * s))?)
    };
    let mut breaks = vec![0.0];
    let mut b = 0.25f64.min(0.5 * s_max);
    while b < s_max {
        breaks.push(b);
        b *= 4.0;
    }
    breaks.push(s_max);
    // leading-mode size of the result sets the absolute accuracy scale
    let q = (r / rho).min(rho / r);
    let m1 = spec.first();
    let lead = q.powf(m1.alpha) / m1.alpha * (m1.boundary_functional * m1.value(x.theta)).abs();
    let spec_q = QuadratureSpec {
        abs_tol: (1e-2 * tol * lead).max(1e-300),
        rel_tol: tol.max(1e-12),
        max_subdivisions: 2000,
    };
    Ok(integrate_pieces_fallible(integrand, &breaks, &spec_q)?.value)
}
