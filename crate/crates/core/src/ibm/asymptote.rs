//! Far-field behavior of the IBM exit radius in the three regimes.

use serde::{Deserialize, Serialize};

use crate::bm::{check_interior, check_positive, mean_exit_time, TailAsymptote};
use crate::cone::{p1 as first_exponent, ConeFamily, PolarPoint, SpectralData};
use crate::error::{Error, Result};
use crate::special::{beta_tail_integral, log_gamma};

/// Tolerance on |p₁ - 2| for cones where p₁ is not known exactly.
pub const CRITICAL_TOLERANCE: f64 = 1e-9;

/// Which tail of the clock dominates the far field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// p₁ < 2
    Sub,
    /// p₁ = 2
    Critical,
    /// p₁ > 2
    Super,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Sub => "sub",
            Regime::Critical => "critical",
            Regime::Super => "super",
        })
    }
}

impl Regime {
    /// Exact for wedges with aperture a rational multiple of π and for
    /// half-spaces; otherwise p₁ is compared with 2 to [`CRITICAL_TOLERANCE`].
    pub fn classify(cone: &ConeFamily, p1: f64) -> Regime {
        if let Some((num, den)) = cone.exact_p1() {
            return match num.cmp(&(2 * den)) {
                std::cmp::Ordering::Less => Regime::Sub,
                std::cmp::Ordering::Equal => Regime::Critical,
                std::cmp::Ordering::Greater => Regime::Super,
            };
        }
        if (p1 - 2.0).abs() <= CRITICAL_TOLERANCE {
            Regime::Critical
        } else if p1 < 2.0 {
            Regime::Sub
        } else {
            Regime::Super
        }
    }

    /// Exponent of the exit-radius tail `P(|Z(τ_C)| > r)`.
    pub fn tail_exponent(self, p1: f64) -> f64 {
        match self {
            Regime::Sub => 2.0 * p1,
            Regime::Critical => 4.0,
            Regime::Super => p1 + 2.0,
        }
    }
}

/// `f(r) ~ A r^{-density_exponent}` (times `ln r` in the critical regime).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IbmAsymptote {
    pub regime: Regime,
    pub p1: f64,
    pub density_exponent: f64,
    pub tail_exponent: f64,
    pub log_correction: bool,
    /// A(z, p₁)
    pub constant: f64,
}

impl IbmAsymptote {
    pub fn density(&self, r: f64) -> f64 {
        let v = self.constant * r.powf(-self.density_exponent);
        if self.log_correction {
            v * r.ln()
        } else {
            v
        }
    }

    /// `P(|Z(τ_C)| > r)` to leading order.
    pub fn tail(&self) -> TailAsymptote {
        let factor = match self.regime {
            Regime::Sub => 1.0 / (2.0 * self.p1),
            Regime::Critical => 0.25,
            Regime::Super => 1.0 / (self.p1 + 2.0),
        };
        TailAsymptote {
            constant: self.constant * factor,
            exponent: self.tail_exponent,
            log_correction: self.log_correction,
        }
    }
}

/// Regime, exponents and the constant A(z, p₁) of the far-field density.
pub fn ibm_asymptote(spec: &SpectralData, z: &PolarPoint, tol: f64) -> Result<IbmAsymptote> {
    check_interior(spec, z)?;
    let m = spec.first();
    let p = m.p;
    let n = spec.dimension() as f64;
    let rho = z.rho;
    let m1 = m.value(z.theta);
    let (d1, s1) = (m.interior_functional, m.boundary_functional);
    let regime = Regime::classify(&spec.cone, p);
    let (constant, density_exponent) = match regime {
        Regime::Sub => {
            let ln_gammas = log_gamma(0.5 * (p + n))? + log_gamma(0.5 * (3.0 * p + n) - 1.0)?
                - 2.0 * log_gamma(p + 0.5 * n)?;
            let a = rho.powf(2.0 * p) * m1 * m1 * d1 * s1 * ln_gammas.exp() * beta_tail_integral(p)?;
            (a, 2.0 * p + 1.0)
        }
        Regime::Critical => (2.0 * rho.powi(4) * m1 * m1 * d1 * s1 / (1.0 + 0.5 * n), 5.0),
        Regime::Super => {
            let mean = mean_exit_time(spec, z, tol)?;
            (2.0 * rho.powf(p) * m1 * s1 * mean, p + 3.0)
        }
    };
    Ok(IbmAsymptote {
        regime,
        p1: p,
        density_exponent,
        tail_exponent: regime.tail_exponent(p),
        log_correction: regime == Regime::Critical,
        constant,
    })
}

/// Asymptotic `P_z(|Z(τ_C)| > r)`; only offered for r ≥ 10ρ.
pub fn ibm_tail(spec: &SpectralData, z: &PolarPoint, r: f64, tol: f64) -> Result<f64> {
    check_positive(r, "radius")?;
    if r < 10.0 * z.rho {
        return Err(Error::Domain(format!(
            "asymptotic tail needs r >= 10 rho = {}, got {r}",
            10.0 * z.rho
        )));
    }
    Ok(ibm_asymptote(spec, z, tol)?.tail().eval(r))
}

/// Whether `E_z |Z(τ_C)|^p` is finite.
pub fn moment_finite(cone: &ConeFamily, p: f64) -> Result<bool> {
    check_positive(p, "moment order")?;
    let p1 = first_exponent(cone)?;
    Ok(p < Regime::classify(cone, p1).tail_exponent(p1))
}

/// Probability that the clock, started at 0, leaves (-u, v) through -u.
pub fn exit_side_probability(u: f64, v: f64) -> Result<f64> {
    check_positive(u, "time")?;
    check_positive(v, "time")?;
    Ok(v / (u + v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{spectrum, BoundaryWeight};
    use std::f64::consts::PI;

    fn data(cone: ConeFamily) -> SpectralData {
        spectrum(&cone, cone.max_terms(), BoundaryWeight::Geometric).unwrap()
    }

    fn wedge(den: u32) -> ConeFamily {
        ConeFamily::wedge_pi_fraction(1, den).unwrap()
    }

    #[test]
    fn regimes() {
        assert_eq!(Regime::classify(&wedge(1), 1.0), Regime::Sub);
        assert_eq!(Regime::classify(&wedge(2), 2.0), Regime::Critical);
        assert_eq!(Regime::classify(&wedge(4), 4.0), Regime::Super);
        let near = ConeFamily::wedge(PI / 2.0 + 1e-12).unwrap();
        assert_eq!(Regime::classify(&near, PI / near.angular_extent()), Regime::Critical);
        let off = ConeFamily::wedge(PI / 2.0 + 1e-6).unwrap();
        assert_eq!(Regime::classify(&off, PI / off.angular_extent()), Regime::Sub);
        assert_eq!(Regime::classify(&ConeFamily::half_space(5).unwrap(), 1.0), Regime::Sub);
    }

    #[test]
    fn half_plane_constant() {
        let s = data(wedge(1));
        let a = ibm_asymptote(&s, &PolarPoint { rho: 1.0, theta: PI / 2.0 }, 1e-10).unwrap();
        assert!((a.constant - 2.0).abs() < 1e-12, "{}", a.constant);
        assert_eq!(a.density_exponent, 3.0);
        assert_eq!(a.tail().exponent, 2.0);
        assert!((a.tail().constant - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constants_positive_and_scale() {
        for den in [1, 2, 4] {
            let s = data(wedge(den));
            let theta = PI / (2.0 * den as f64);
            let a1 = ibm_asymptote(&s, &PolarPoint { rho: 1.0, theta }, 1e-10).unwrap();
            let a2 = ibm_asymptote(&s, &PolarPoint { rho: 2.0, theta }, 1e-10).unwrap();
            assert!(a1.constant > 0.0);
            // A(z) r^{-k} is a density in r, so A scales like ρ^{k-1}
            let want = 2f64.powf(a1.density_exponent - 1.0);
            if a1.regime != Regime::Critical {
                assert!((a2.constant / a1.constant / want - 1.0).abs() < 1e-7, "den {den}");
            }
        }
    }

    #[test]
    fn tail_derivative_is_density() {
        let s = data(wedge(1));
        let a = ibm_asymptote(&s, &PolarPoint { rho: 1.0, theta: 1.0 }, 1e-10).unwrap();
        let t = a.tail();
        for &r in &[12.0, 40.0, 300.0] {
            let h = 1e-4 * r;
            let d = -(t.eval(r + h) - t.eval(r - h)) / (2.0 * h);
            assert!((d / a.density(r) - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn tail_refused_near_start() {
        let s = data(wedge(1));
        let z = PolarPoint { rho: 1.0, theta: 1.0 };
        assert!(ibm_tail(&s, &z, 9.9, 1e-8).is_err());
        assert!(ibm_tail(&s, &z, 10.0, 1e-8).unwrap() > 0.0);
    }

    #[test]
    fn moment_thresholds() {
        let cases = [(1, 1.9, 2.0), (2, 3.99, 4.0), (4, 5.9, 6.0)];
        for (den, below, at) in cases {
            assert!(moment_finite(&wedge(den), below).unwrap());
            assert!(!moment_finite(&wedge(den), at).unwrap());
        }
        assert!(moment_finite(&wedge(1), 0.0).is_err());
    }

    #[test]
    fn side_probability() {
        assert_eq!(exit_side_probability(1.0, 3.0).unwrap(), 0.75);
        assert_eq!(exit_side_probability(2.5, 2.5).unwrap(), 0.5);
        let (u, v) = (0.3, 7.1);
        let total = exit_side_probability(u, v).unwrap() + exit_side_probability(v, u).unwrap();
        assert!((total - 1.0).abs() < 1e-15);
        assert!(exit_side_probability(0.0, 1.0).is_err());
    }
}
