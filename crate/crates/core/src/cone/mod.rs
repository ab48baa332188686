//! Cone families, polar points and the cone specification syntax.
//!
//! A cone is written as one of
//!
//! ```text
//! wedge:a=<radians>        planar wedge of aperture a, 0 < a < 2π
//! halfspace:n=<int>        half-space in n ≥ 2 dimensions
//! cone3d:theta0=<radians>  circular cone in three dimensions, 0 < θ₀ < π
//! ```
//!
//! Angles accept plain decimals or multiples of π such as `pi/4`, `2pi/3`
//! or `3*pi/4`. A wedge written as a rational multiple of π keeps that
//! fraction so its exponent `p₁ = π/a` is known exactly.

mod spectrum;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use spectrum::{p1, spectrum, BoundaryWeight, Mode, SpectralData};

/// Cone generated by a domain on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ConeFamily {
    /// Planar wedge `{0 < arg z < aperture}`. `pi_fraction = (num, den)`
    /// records `aperture = num·π/den` when the aperture was given that way.
    Wedge2D {
        aperture: f64,
        pi_fraction: Option<(u32, u32)>,
    },
    /// `{x_n > 0}` in `dim` dimensions.
    HalfSpace { dim: usize },
    /// `{angle(x, e₃) < half_angle}` in three dimensions.
    CircularCone3D { half_angle: f64 },
}

impl ConeFamily {
    pub fn wedge(aperture: f64) -> Result<Self> {
        if !(aperture > 0.0 && aperture < 2.0 * PI) {
            return Err(Error::InvalidCone(format!("wedge aperture must lie in (0, 2π), got {aperture}")));
        }
        Ok(ConeFamily::Wedge2D {
            aperture,
            pi_fraction: None,
        })
    }

    /// Wedge of aperture `num·π/den`.
    pub fn wedge_pi_fraction(num: u32, den: u32) -> Result<Self> {
        if num == 0 || den == 0 || num >= 2 * den {
            return Err(Error::InvalidCone(format!("wedge aperture {num}π/{den} outside (0, 2π)")));
        }
        let g = gcd(num, den);
        let (num, den) = (num / g, den / g);
        Ok(ConeFamily::Wedge2D {
            aperture: num as f64 * PI / den as f64,
            pi_fraction: Some((num, den)),
        })
    }

    pub fn half_space(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidCone(format!("half-space dimension must be >= 2, got {dim}")));
        }
        Ok(ConeFamily::HalfSpace { dim })
    }

    pub fn circular_cone(half_angle: f64) -> Result<Self> {
        if !(half_angle > 0.0 && half_angle < PI) {
            return Err(Error::InvalidCone(format!("cone half-angle must lie in (0, π), got {half_angle}")));
        }
        Ok(ConeFamily::CircularCone3D { half_angle })
    }

    /// Ambient dimension n.
    pub fn dimension(&self) -> usize {
        match *self {
            ConeFamily::Wedge2D { .. } => 2,
            ConeFamily::HalfSpace { dim } => dim,
            ConeFamily::CircularCone3D { .. } => 3,
        }
    }

    /// Largest value the angular coordinate may take.
    pub fn angular_extent(&self) -> f64 {
        match *self {
            ConeFamily::Wedge2D { aperture, .. } => aperture,
            ConeFamily::HalfSpace { .. } => 0.5 * PI,
            ConeFamily::CircularCone3D { half_angle } => half_angle,
        }
    }

    /// Angular coordinate of the symmetry axis: a/2 for wedges, 0 otherwise.
    pub fn bisector(&self) -> f64 {
        match *self {
            ConeFamily::Wedge2D { aperture, .. } => 0.5 * aperture,
            _ => 0.0,
        }
    }

    /// Default cap on the number of spectral terms in series evaluations.
    pub fn max_terms(&self) -> usize {
        match self {
            ConeFamily::Wedge2D { .. } => 200,
            _ => 60,
        }
    }

    /// Exact `p₁` when it is known in closed form: `den/num` for a wedge of
    /// aperture `num·π/den` and 1 for a half-space.
    pub fn exact_p1(&self) -> Option<(u32, u32)> {
        match *self {
            ConeFamily::Wedge2D {
                pi_fraction: Some((num, den)),
                ..
            } => Some((den, num)),
            ConeFamily::HalfSpace { .. } => Some((1, 1)),
            _ => None,
        }
    }

    /// Checks that (ρ, θ) lies in the closed cone minus the vertex.
    pub fn point(&self, rho: f64, theta: f64) -> Result<PolarPoint> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::InvalidPoint(format!("radius must be positive, got {rho}")));
        }
        let extent = self.angular_extent();
        if !(theta >= 0.0 && theta <= extent) {
            return Err(Error::InvalidPoint(format!("angle {theta} outside [0, {extent}]")));
        }
        Ok(PolarPoint { rho, theta })
    }

    /// Like [`ConeFamily::point`] but the point must be interior.
    pub fn interior_point(&self, rho: f64, theta: f64) -> Result<PolarPoint> {
        let p = self.point(rho, theta)?;
        if self.on_boundary(&p) {
            return Err(Error::InvalidPoint(format!("({rho}, {theta}) lies on the boundary")));
        }
        Ok(p)
    }

    pub fn on_boundary(&self, p: &PolarPoint) -> bool {
        match *self {
            ConeFamily::Wedge2D { aperture, .. } => p.theta == 0.0 || p.theta == aperture,
            _ => p.theta == self.angular_extent(),
        }
    }

    /// Smallest angle between the direction θ and the boundary of the
    /// generating domain.
    pub fn boundary_gap(&self, theta: f64) -> f64 {
        match *self {
            ConeFamily::Wedge2D { aperture, .. } => theta.min(aperture - theta),
            _ => self.angular_extent() - theta,
        }
    }

    /// Euclidean distance from a point to the boundary of the cone.
    pub fn boundary_distance(&self, p: &PolarPoint) -> f64 {
        let gap = self.boundary_gap(p.theta);
        if gap >= 0.5 * PI {
            p.rho
        } else {
            p.rho * gap.sin()
        }
    }

    /// Cartesian coordinates of a polar point. Wedges use (ρ cos θ, ρ sin θ);
    /// the three-dimensional families put the axis along the last coordinate
    /// and the point in the plane of the first and last coordinates.
    pub fn to_cartesian(&self, p: &PolarPoint) -> Vec<f64> {
        match *self {
            ConeFamily::Wedge2D { .. } => vec![p.rho * p.theta.cos(), p.rho * p.theta.sin()],
            _ => {
                let n = self.dimension();
                let mut x = vec![0.0; n];
                x[0] = p.rho * p.theta.sin();
                x[n - 1] = p.rho * p.theta.cos();
                x
            }
        }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for ConeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ConeFamily::Wedge2D {
                pi_fraction: Some((num, den)),
                ..
            } => match (num, den) {
                (1, 1) => write!(f, "wedge:a=pi"),
                (1, d) => write!(f, "wedge:a=pi/{d}"),
                (n, 1) => write!(f, "wedge:a={n}pi"),
                (n, d) => write!(f, "wedge:a={n}pi/{d}"),
            },
            ConeFamily::Wedge2D { aperture, .. } => write!(f, "wedge:a={aperture}"),
            ConeFamily::HalfSpace { dim } => write!(f, "halfspace:n={dim}"),
            ConeFamily::CircularCone3D { half_angle } => write!(f, "cone3d:theta0={half_angle}"),
        }
    }
}

/// Parses `k`, `k.k`, `pi`, `2pi`, `2*pi`, `pi/4`, `3pi/4`, `3*pi/4`.
/// Returns the value and, for π multiples, the reduced fraction.
pub(crate) fn parse_angle(text: &str) -> Result<(f64, Option<(u32, u32)>)> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let lower = s.to_ascii_lowercase();
    if let Some(pos) = lower.find("pi") {
        let coeff = lower[..pos].trim_end_matches('*');
        let rest = &lower[pos + 2..];
        let num: u32 = if coeff.is_empty() {
            1
        } else {
            coeff
                .parse()
                .map_err(|_| Error::Parse(format!("bad multiple of pi in '{text}'")))?
        };
        let den: u32 = if rest.is_empty() {
            1
        } else if let Some(d) = rest.strip_prefix('/') {
            d.parse().map_err(|_| Error::Parse(format!("bad divisor in '{text}'")))?
        } else {
            return Err(Error::Parse(format!("cannot parse angle '{text}'")));
        };
        if num == 0 || den == 0 {
            return Err(Error::Parse(format!("degenerate angle '{text}'")));
        }
        let g = gcd(num, den);
        let (num, den) = (num / g, den / g);
        return Ok((num as f64 * PI / den as f64, Some((num, den))));
    }
    let v: f64 = lower
        .parse()
        .map_err(|_| Error::Parse(format!("cannot parse angle '{text}'")))?;
    Ok((v, None))
}

impl FromStr for ConeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("cone spec '{s}' lacks ':'")))?;
        let (key, value) = arg
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("cone spec '{s}' lacks '='")))?;
        match (kind.trim(), key.trim()) {
            ("wedge", "a") => match parse_angle(value)? {
                (_, Some((num, den))) => ConeFamily::wedge_pi_fraction(num, den),
                (a, None) => ConeFamily::wedge(a),
            },
            ("halfspace", "n") => {
                let n: usize = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad dimension in '{s}'")))?;
                ConeFamily::half_space(n)
            }
            ("cone3d", "theta0") => ConeFamily::circular_cone(parse_angle(value)?.0),
            _ => Err(Error::Parse(format!(
                "unknown cone spec '{s}' (expected wedge:a=, halfspace:n= or cone3d:theta0=)"
            ))),
        }
    }
}

/// Point x = ρθ: radius and angular coordinate. For wedges θ is the polar
/// angle in [0, a]; for the three-dimensional families it is the angle from
/// the symmetry axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarPoint {
    pub rho: f64,
    pub theta: f64,
}
