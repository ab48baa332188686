//! Radial exit density of iterated Brownian motion.
//!
//! With `G` the clock kernel and `γ = 2ρr/(ρ² + r²)`,
//!
//! ```text
//! f(r) = r^{n/2-2} ρ^{1-n/2} Σ_j m_j(θ) S_j I_j,
//! I_j  = ∫_0^∞ s⁻¹ e^{-s} I_{α_j}(γs) G((ρ² + r²)/2s) ds  ≤  α_j⁻¹ q^{α_j},
//! ```
//!
//! where `q = min(r/ρ, ρ/r)`. The bound is the Brownian-motion term, since
//! G ≤ 1; it controls truncation.

use rayon::prelude::*;

use crate::bm::{check_interior, check_positive, flux_time_integral, radial_prefactor, similarity, DEFAULT_EPS_MIN};
use crate::cone::{Mode, PolarPoint, SpectralData};
use crate::error::{Error, Result};
use crate::special::{bessel_i_scaled, integrate_pieces_fallible, QuadratureSpec};

use super::asymptote::{ibm_asymptote, IbmAsymptote};
use super::clock::ClockKernel;

/// Share of the tolerance given to the truncated remainder.
const TRUNCATION_SHARE: f64 = 0.1;

fn term_bound(m: &Mode, ln_q: f64) -> f64 {
    (m.alpha * ln_q).exp() / m.alpha * (m.boundary_functional * m.sup_norm()).abs()
}

fn inner_integral(m: &Mode, gamma: f64, sum_sq: f64, clock: &ClockKernel, rel_tol: f64, abs_tol: f64) -> Result<f64> {
    let alpha = m.alpha;
    let s_max = (alpha + 12.0 * alpha.sqrt() + 45.0) / (1.0 - gamma);
    let mut breaks = vec![0.0];
    let mut b = 0.25f64.min(0.5 * s_max);
    while b < s_max {
        breaks.push(b);
        b *= 2.0;
    }
    breaks.push(s_max);
    let spec = QuadratureSpec {
        abs_tol: abs_tol.max(1e-300),
        rel_tol,
        max_subdivisions: 2000,
    };
    let integrand = |s: f64| -> Result<f64> {
        let damping = (-(1.0 - gamma) * s).exp();
        if damping == 0.0 {
            return Ok(0.0);
        }
        Ok(damping * bessel_i_scaled(alpha, gamma * s)? / s * clock.eval(sum_sq / (2.0 * s))?)
    };
    Ok(integrate_pieces_fallible(integrand, &breaks, &spec)?.value)
}

/// Per-mode contributions `β_j(r)` to the density, in mode order.
fn series_terms(
    spec: &SpectralData,
    clock: &ClockKernel,
    z: &PolarPoint,
    r: f64,
    tol: f64,
    eps_min: f64,
) -> Result<Vec<f64>> {
    check_positive(r, "radius")?;
    check_positive(tol, "tolerance")?;
    check_interior(spec, z)?;
    let (gamma, q) = similarity(z.rho, r);
    if gamma > 1.0 - eps_min {
        return Err(Error::NearDiagonal { gamma, eps: eps_min });
    }
    let sum_sq = z.rho * z.rho + r * r;
    let ln_q = q.ln();
    let modes = &spec.modes;

    let first = &modes[0];
    let coef = |m: &Mode| m.boundary_functional * m.value(z.theta);
    let lead_bound = term_bound(first, ln_q);
    let lead = coef(first) * inner_integral(first, gamma, sum_sq, clock, tol, 1e-3 * tol * lead_bound)?;

    // remainder bounds decide the number of terms before any is computed
    let budget = TRUNCATION_SHARE * tol * lead.abs();
    let bounds: Vec<f64> = modes.iter().map(|m| term_bound(m, ln_q)).collect();
    let mut tail = 0.0;
    let mut count = None;
    for j in (1..bounds.len()).rev() {
        tail += bounds[j];
        if tail > budget {
            count = Some(j + 1);
            break;
        }
    }
    let count = count.unwrap_or(1);
    // geometric continuation from the last two nonzero bounds
    let mut nonzero = bounds.iter().rev().filter(|&&b| b > 0.0);
    let beyond = match (nonzero.next(), nonzero.next()) {
        (Some(&last), Some(&prev)) if last < prev => last * (last / prev) / (1.0 - last / prev),
        _ => f64::INFINITY,
    };
    if beyond > budget {
        return Err(Error::SeriesNotConverged {
            terms: modes.len(),
            bound: beyond,
        });
    }

    let per_term = tol / count as f64;
    let prefactor = radial_prefactor(spec, z.rho, r);
    let mut terms = vec![prefactor * lead];
    let rest: Vec<f64> = modes[1..count]
        .par_iter()
        .map(|m| {
            let c = coef(m);
            if c == 0.0 {
                return Ok(0.0);
            }
            let abs_tol = 1e-3 * per_term * lead.abs() / (m.boundary_functional * m.sup_norm()).abs();
            Ok(prefactor * c * inner_integral(m, gamma, sum_sq, clock, per_term.max(1e-12), abs_tol)?)
        })
        .collect::<Result<_>>()?;
    terms.extend(rest);
    Ok(terms)
}

fn series_density(
    spec: &SpectralData,
    clock: &ClockKernel,
    z: &PolarPoint,
    r: f64,
    tol: f64,
    eps_min: f64,
) -> Result<f64> {
    let terms = series_terms(spec, clock, z, r, tol, eps_min)?;
    Ok(terms.iter().sum::<f64>().max(0.0))
}

/// Bridged form: the series under a single time integral, finite for every
/// r including r = ρ.
fn bridged_density(spec: &SpectralData, clock: &ClockKernel, z: &PolarPoint, r: f64, tol: f64) -> Result<f64> {
    check_positive(r, "radius")?;
    check_positive(tol, "tolerance")?;
    check_interior(spec, z)?;
    let integral = flux_time_integral(spec, z, r, tol, |t| clock.eval(t))?;
    Ok((radial_prefactor(spec, z.rho, r) * integral).max(0.0))
}

/// Density of `|Z(τ_C)|` at r by the per-mode series. Refused with
/// [`Error::NearDiagonal`] when γ exceeds `1 - DEFAULT_EPS_MIN`.
///
/// Builds the clock kernel on every call; use [`IbmExitLaw`] for repeated
/// evaluation.
pub fn ibm_radial_density(spec: &SpectralData, z: &PolarPoint, r: f64, tol: f64) -> Result<f64> {
    check_interior(spec, z)?;
    check_positive(r, "radius")?;
    let (gamma, _) = similarity(z.rho, r);
    if gamma > 1.0 - DEFAULT_EPS_MIN {
        return Err(Error::NearDiagonal { gamma, eps: DEFAULT_EPS_MIN });
    }
    let clock = ClockKernel::new(spec.clone(), *z)?;
    series_density(spec, &clock, z, r, tol, DEFAULT_EPS_MIN)
}

/// Exit-radius law of iterated Brownian motion started at z.
#[derive(Debug, Clone)]
pub struct IbmExitLaw {
    spec: SpectralData,
    start: PolarPoint,
    clock: ClockKernel,
    asymptote: IbmAsymptote,
    tol: f64,
    eps_min: f64,
}

impl IbmExitLaw {
    pub fn new(spec: SpectralData, start: PolarPoint, tol: f64) -> Result<Self> {
        check_positive(tol, "tolerance")?;
        check_interior(&spec, &start)?;
        let clock = ClockKernel::new(spec.clone(), start)?;
        let asymptote = ibm_asymptote(&spec, &start, tol.min(1e-8))?;
        Ok(Self {
            spec,
            start,
            clock,
            asymptote,
            tol,
            eps_min: DEFAULT_EPS_MIN,
        })
    }

    /// Width of the band around r = ρ handled by the bridged form.
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

    pub fn clock(&self) -> &ClockKernel {
        &self.clock
    }

    pub fn asymptote(&self) -> IbmAsymptote {
        self.asymptote
    }

    /// Strict series evaluation, as [`ibm_radial_density`].
    pub fn series(&self, r: f64) -> Result<f64> {
        series_density(&self.spec, &self.clock, &self.start, r, self.tol, self.eps_min)
    }

    /// The series split into its per-mode contributions; they sum to
    /// [`series`](Self::series) before clamping at zero.
    pub fn mode_terms(&self, r: f64) -> Result<Vec<f64>> {
        series_terms(&self.spec, &self.clock, &self.start, r, self.tol, self.eps_min)
    }

    /// Bridged evaluation, valid for every r > 0.
    pub fn bridged(&self, r: f64) -> Result<f64> {
        bridged_density(&self.spec, &self.clock, &self.start, r, self.tol)
    }

    /// Density at r: the series away from the diagonal, the bridged form
    /// near it or wherever the series needs more modes than are available.
    pub fn density(&self, r: f64) -> Result<f64> {
        match self.series(r) {
            Err(Error::NearDiagonal { .. } | Error::SeriesNotConverged { .. }) => self.bridged(r),
            other => other,
        }
    }

    /// `P(|Z(τ_C)| > r)`: quadrature of the density up to `R = max(10³ρ, 10r)`
    /// plus the asymptotic tail beyond R.
    pub fn tail(&self, r: f64) -> Result<f64> {
        check_positive(r, "radius")?;
        let far = (1e3 * self.start.rho).max(10.0 * r);
        Ok(self.mass(r, far)? + self.asymptote.tail().eval(far))
    }

    /// `P(a < |Z(τ_C)| < b)` by quadrature of the density.
    pub fn mass(&self, a: f64, b: f64) -> Result<f64> {
        check_positive(a, "radius")?;
        if !(b > a) {
            return Err(Error::Domain(format!("need a < b, got ({a}, {b})")));
        }
        let rho = self.start.rho;
        let mut breaks = vec![a];
        for k in [0.25, 0.5, 0.9, 0.97, 1.0, 1.03, 1.1, 2.0, 4.0, 16.0, 64.0, 256.0] {
            let x = k * rho;
            if x > a && x < b {
                breaks.push(x);
            }
        }
        breaks.push(b);
        let spec = QuadratureSpec {
            abs_tol: 1e-3 * self.tol,
            rel_tol: self.tol.max(1e-10),
            max_subdivisions: 2000,
        };
        Ok(integrate_pieces_fallible(|r| self.density(r), &breaks, &spec)?.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{spectrum, BoundaryWeight, ConeFamily};
    use std::f64::consts::PI;

    fn law(cone: ConeFamily, theta: f64, tol: f64) -> IbmExitLaw {
        let s = spectrum(&cone, cone.max_terms(), BoundaryWeight::Geometric).unwrap();
        IbmExitLaw::new(s, PolarPoint { rho: 1.0, theta }, tol).unwrap()
    }

    #[test]
    fn bridged_agrees_with_series() {
        let l = law(ConeFamily::wedge(PI / 2.0).unwrap(), PI / 4.0, 1e-9);
        for &r in &[0.3, 0.6, 1.6, 3.0, 20.0] {
            let a = l.series(r).unwrap();
            let b = l.bridged(r).unwrap();
            assert!((a / b - 1.0).abs() < 1e-6, "r = {r}: {a} vs {b}");
        }
    }

    #[test]
    fn thinner_tail_than_brownian() {
        // half-plane: r^{-3} against the Brownian r^{-2}
        let cone = ConeFamily::wedge(PI).unwrap();
        let s = spectrum(&cone, cone.max_terms(), BoundaryWeight::Geometric).unwrap();
        let z = PolarPoint { rho: 1.0, theta: PI / 2.0 };
        let l = IbmExitLaw::new(s.clone(), z, 1e-8).unwrap();
        let bm = crate::bm::exit_radial_density(&s, &z, 200.0, 1e-10).unwrap();
        let ibm = l.density(200.0).unwrap();
        assert!(ibm < bm, "{ibm} vs {bm}");
    }

    #[test]
    fn rejects_near_diagonal() {
        let cone = ConeFamily::wedge(1.0).unwrap();
        let s = spectrum(&cone, 50, BoundaryWeight::Geometric).unwrap();
        let z = PolarPoint { rho: 1.0, theta: 0.5 };
        let e = ibm_radial_density(&s, &z, 1.0001, 1e-8).unwrap_err();
        assert!(matches!(e, Error::NearDiagonal { .. }));
    }
}
