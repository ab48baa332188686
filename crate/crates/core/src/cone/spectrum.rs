//! Dirichlet spectral data of the Laplace–Beltrami operator on the domain
//! that generates a cone.
//!
//! Only modes that are invariant under rotations about the symmetry axis are
//! produced for the three-dimensional families. Modes with azimuthal
//! dependence integrate to zero against the boundary and over the domain,
//! so they never enter the radial exit laws or the survival function.
//!
//! Boundary functionals use surface measure on the boundary of the domain
//! (arclength on the rim circle for a circular cone, the two endpoint
//! masses for a wedge). With that measure `λ_j D_j = S_j` holds for every
//! mode by Green's identity.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ConeFamily;
use crate::error::{Error, Result};
use crate::special::{integrate_adaptive, legendre_p, legendre_p_derivative, log_gamma, QuadratureSpec};

/// Weight multiplying the normal derivative in boundary functionals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BoundaryWeight {
    /// Surface measure of the boundary (w ≡ 1 for wedges).
    #[default]
    Geometric,
    /// Extra factor sin φ(η), φ the angle between the boundary and the
    /// symmetry axis: sin(a/2) for wedges, sin θ₀ for circular cones.
    AxisSine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
enum Shape {
    /// √(2/a) sin(k θ), k = jπ/a.
    Sine { k: f64, norm: f64 },
    /// c · P_ν(cos θ).
    Legendre { nu: f64, norm: f64 },
    /// c · C_k^{(λ)}(cos θ); λ = 0 stands for the Chebyshev limit cos(kθ).
    Gegenbauer { degree: usize, order: f64, norm: f64 },
}

/// One eigenpair with its derived exponents and functionals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    /// 1-based position in the spectrum.
    pub index: usize,
    pub lambda: f64,
    /// `α = √(λ + (n/2 - 1)²)`.
    pub alpha: f64,
    /// `p = α - (n/2 - 1)`.
    pub p: f64,
    /// `S_j = ∫_{∂D} w ∂m_j/∂n dμ` with the inward normal.
    pub boundary_functional: f64,
    /// `D_j = ∫_D m_j dμ`.
    pub interior_functional: f64,
    shape: Shape,
    extent: f64,
}

impl Mode {
    /// Normalized eigenfunction at angular coordinate θ.
    pub fn value(&self, theta: f64) -> f64 {
        match self.shape {
            Shape::Sine { k, norm } => norm * (k * theta).sin(),
            Shape::Legendre { nu, norm } => norm * legendre_p(nu, theta.cos()).unwrap_or(f64::NAN),
            Shape::Gegenbauer { degree, order, norm } => norm * gegenbauer(degree, order, theta.cos()).0,
        }
    }

    /// Upper bound for |m_j| on the domain.
    pub fn sup_norm(&self) -> f64 {
        match self.shape {
            Shape::Sine { norm, .. } => norm,
            _ => self.value(0.0).abs(),
        }
    }

    /// Inward normal derivative at the boundary point with angular
    /// coordinate `eta` (0 or a for wedges; the rim for the other families).
    pub fn normal_derivative(&self, eta: f64) -> f64 {
        match self.shape {
            Shape::Sine { k, norm } => {
                if eta == 0.0 {
                    norm * k
                } else {
                    -norm * k * (k * self.extent).cos()
                }
            }
            Shape::Legendre { nu, norm } => {
                let t0 = self.extent;
                norm * t0.sin() * legendre_p_derivative(nu, t0.cos()).unwrap_or(f64::NAN)
            }
            Shape::Gegenbauer { degree, order, norm } => norm * gegenbauer(degree, order, 0.0).1,
        }
    }
}

/// Spectral data of a cone: the first J axisymmetric modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub cone: ConeFamily,
    pub weight: BoundaryWeight,
    pub modes: Vec<Mode>,
}

impl SpectralData {
    pub fn dimension(&self) -> usize {
        self.cone.dimension()
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn first(&self) -> &Mode {
        &self.modes[0]
    }

    /// `p₁`, the exit-place tail exponent of Brownian motion.
    pub fn p1(&self) -> f64 {
        self.modes[0].p
    }

    /// `n/2 - 1`.
    pub fn shift(&self) -> f64 {
        0.5 * self.dimension() as f64 - 1.0
    }
}

/// `p₁ = √(λ₁ + (n/2 - 1)²) - (n/2 - 1)`.
pub fn p1(cone: &ConeFamily) -> Result<f64> {
    match *cone {
        ConeFamily::Wedge2D { aperture, .. } => Ok(PI / aperture),
        ConeFamily::HalfSpace { .. } => Ok(1.0),
        ConeFamily::CircularCone3D { half_angle } => Ok(legendre_degree_roots(half_angle, 1)?[0]),
    }
}

/// Builds the first `terms` spectral entries of `cone`.
pub fn spectrum(cone: &ConeFamily, terms: usize, weight: BoundaryWeight) -> Result<SpectralData> {
    if terms == 0 {
        return Err(Error::Domain("at least one spectral term is required".into()));
    }
    let modes = match *cone {
        ConeFamily::Wedge2D { aperture, .. } => wedge_modes(aperture, terms, weight),
        ConeFamily::HalfSpace { dim } => half_space_modes(dim, terms)?,
        ConeFamily::CircularCone3D { half_angle } => cone_modes(half_angle, terms, weight)?,
    };
    Ok(SpectralData {
        cone: *cone,
        weight,
        modes,
    })
}

fn wedge_modes(a: f64, terms: usize, weight: BoundaryWeight) -> Vec<Mode> {
    let norm = (2.0 / a).sqrt();
    let w = match weight {
        BoundaryWeight::Geometric => 1.0,
        BoundaryWeight::AxisSine => (0.5 * a).sin(),
    };
    (1..=terms)
        .map(|j| {
            let k = j as f64 * PI / a;
            let parity = if j % 2 == 1 { 2.0 } else { 0.0 };
            Mode {
                index: j,
                lambda: k * k,
                alpha: k,
                p: k,
                boundary_functional: w * norm * k * parity,
                interior_functional: norm * parity / k,
                shape: Shape::Sine { k, norm },
                extent: a,
            }
        })
        .collect()
}

/// Area of the unit sphere S^m in R^{m+1}.
pub(crate) fn sphere_area(m: usize) -> f64 {
    let h = 0.5 * (m as f64 + 1.0);
    2.0 * PI.powf(h) / log_gamma(h).expect("positive argument").exp()
}

/// Gegenbauer polynomial `C_k^{(λ)}(x)` and its derivative; λ = 0 gives
/// the Chebyshev polynomial `T_k` and `T_k'`.
fn gegenbauer(k: usize, lambda: f64, x: f64) -> (f64, f64) {
    if lambda == 0.0 {
        // T_k(x) and T_k'(x) = k U_{k-1}(x)
        let (mut t0, mut t1) = (1.0, x);
        let (mut u0, mut u1) = (1.0, 2.0 * x);
        if k == 0 {
            return (1.0, 0.0);
        }
        for _ in 1..k {
            let t2 = 2.0 * x * t1 - t0;
            t0 = t1;
            t1 = t2;
            let u2 = 2.0 * x * u1 - u0;
            u0 = u1;
            u1 = u2;
        }
        return (t1, k as f64 * u0);
    }
    let value = gegenbauer_value(k, lambda, x);
    let deriv = if k == 0 {
        0.0
    } else {
        2.0 * lambda * gegenbauer_value(k - 1, lambda + 1.0, x)
    };
    (value, deriv)
}

fn gegenbauer_value(k: usize, lambda: f64, x: f64) -> f64 {
    let mut c0 = 1.0;
    if k == 0 {
        return c0;
    }
    let mut c1 = 2.0 * lambda * x;
    for m in 1..k {
        let mf = m as f64;
        let c2 = (2.0 * (mf + lambda) * x * c1 - (mf + 2.0 * lambda - 1.0) * c0) / (mf + 1.0);
        c0 = c1;
        c1 = c2;
    }
    c1
}

fn tight() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-14,
        rel_tol: 1e-12,
        max_subdivisions: 2000,
    }
}

fn half_space_modes(dim: usize, terms: usize) -> Result<Vec<Mode>> {
    let n = dim as f64;
    let order = 0.5 * n - 1.0;
    let rim = sphere_area(dim - 2);
    let sin_pow = |phi: f64| phi.sin().powi(dim as i32 - 2);
    let mut modes = Vec::with_capacity(terms);
    for j in 1..=terms {
        let degree = 2 * j - 1;
        let kf = degree as f64;
        let sq = integrate_adaptive(
            |phi| gegenbauer(degree, order, phi.cos()).0.powi(2) * sin_pow(phi),
            0.0,
            0.5 * PI,
            &tight(),
        )?;
        let norm = 1.0 / (rim * sq.value).sqrt();
        let mean = integrate_adaptive(
            |phi| gegenbauer(degree, order, phi.cos()).0 * sin_pow(phi),
            0.0,
            0.5 * PI,
            &tight(),
        )?;
        let lambda = kf * (kf + n - 2.0);
        modes.push(Mode {
            index: j,
            lambda,
            alpha: kf + order,
            p: kf,
            boundary_functional: rim * norm * gegenbauer(degree, order, 0.0).1,
            interior_functional: rim * norm * mean.value,
            shape: Shape::Gegenbauer { degree, order, norm },
            extent: 0.5 * PI,
        });
    }
    Ok(modes)
}

/// Positive roots ν of `ν ↦ P_ν(cos θ₀)`, in increasing order.
pub(crate) fn legendre_degree_roots(theta0: f64, count: usize) -> Result<Vec<f64>> {
    let x0 = theta0.cos();
    let f = |nu: f64| legendre_p(nu, x0);
    // roots are spaced by about π/θ₀ > 1; a quarter step cannot skip a pair
    let step = 0.25;
    let limit = 20.0 + 2.0 * (count as f64 + 1.0) * PI / theta0;
    let mut roots = Vec::with_capacity(count);
    let mut lo = 0.0;
    let mut f_lo = f(lo)?;
    while roots.len() < count {
        let hi = lo + step;
        if hi > limit {
            return Err(Error::Bracketing(format!(
                "found {} of {count} Legendre degree roots below nu = {limit}",
                roots.len()
            )));
        }
        let f_hi = f(hi)?;
        if f_hi == 0.0 {
            roots.push(hi);
            lo = hi + 1e-9;
            f_lo = f(lo)?;
            continue;
        }
        if f_lo.signum() != f_hi.signum() {
            roots.push(refine_root(&f, lo, hi, f_lo, f_hi)?);
        }
        lo = hi;
        f_lo = f_hi;
    }
    Ok(roots)
}

/// Bracketed root by bisection interleaved with secant steps.
fn refine_root<F>(f: &F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    for _ in 0..200 {
        let secant = b - fb * (b - a) / (fb - fa);
        let mid = 0.5 * (a + b);
        let x = if secant > a && secant < b && (b - a) < 0.5 { secant } else { mid };
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        // a secant step that lands on the same side twice stalls; bisect
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
        if (b - a).abs() < 1e-14 * b.abs().max(1.0) {
            return Ok(if fa.abs() < fb.abs() { a } else { b });
        }
    }
    Err(Error::Bracketing(format!("root refinement stalled in [{a}, {b}]")))
}

fn cone_modes(theta0: f64, terms: usize, weight: BoundaryWeight) -> Result<Vec<Mode>> {
    let roots = legendre_degree_roots(theta0, terms)?;
    let x0 = theta0.cos();
    let rim = 2.0 * PI * theta0.sin();
    let w = match weight {
        BoundaryWeight::Geometric => 1.0,
        BoundaryWeight::AxisSine => theta0.sin(),
    };
    let mut modes = Vec::with_capacity(terms);
    for (i, &nu) in roots.iter().enumerate() {
        let p_at = |theta: f64| legendre_p(nu, theta.cos()).unwrap_or(f64::NAN);
        let sq = integrate_adaptive(|t| p_at(t).powi(2) * t.sin(), 0.0, theta0, &tight())?;
        let norm = 1.0 / (2.0 * PI * sq.value).sqrt();
        // the mean cancels; its accuracy is bounded by the mode's L2 scale
        let cancel = QuadratureSpec {
            abs_tol: 1e-12 * (sq.value * (1.0 - x0)).sqrt(),
            ..tight()
        };
        let mean = integrate_adaptive(|t| p_at(t) * t.sin(), 0.0, theta0, &cancel)?;
        let inward = norm * theta0.sin() * legendre_p_derivative(nu, x0)?;
        let alpha = nu + 0.5;
        modes.push(Mode {
            index: i + 1,
            lambda: nu * (nu + 1.0),
            alpha,
            p: nu,
            boundary_functional: w * rim * inward,
            interior_functional: 2.0 * PI * norm * mean.value,
            shape: Shape::Legendre { nu, norm },
            extent: theta0,
        });
    }
    Ok(modes)
}
