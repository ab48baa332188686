use std::f64::consts::PI;

use proptest::prelude::*;

use cone_exit::bm::{exit_radial_density, survival, RadialLaw};
use cone_exit::ibm::exit_side_probability;
use cone_exit::mc::{ks_distance, select_side, Side};
use cone_exit::special::{bessel_i, integrate_adaptive, legendre_p, QuadratureSpec};
use cone_exit::{spectrum, BoundaryWeight, ConeFamily, PolarPoint, SpectralData};

fn any_cone() -> impl Strategy<Value = ConeFamily> {
    prop_oneof![
        (0.3f64..6.0).prop_map(|a| ConeFamily::wedge(a).unwrap()),
        (0.3f64..2.9).prop_map(|t| ConeFamily::circular_cone(t).unwrap()),
        (2usize..7).prop_map(|n| ConeFamily::half_space(n).unwrap()),
    ]
}

fn spec(cone: &ConeFamily, terms: usize) -> SpectralData {
    spectrum(cone, terms, BoundaryWeight::Geometric).unwrap()
}

/// ∫_D f dμ with the measure of the generating domain.
fn over_domain(cone: &ConeFamily, f: impl Fn(f64) -> f64) -> f64 {
    let q = QuadratureSpec::new(1e-14, 1e-12, 500).unwrap();
    let (weight, n): (Box<dyn Fn(f64) -> f64>, usize) = match cone {
        ConeFamily::Wedge2D { .. } => (Box::new(|_| 1.0), 2),
        _ => (Box::new(|t: f64| 2.0 * PI * t.sin()), 3),
    };
    assert!(cone.dimension() == n);
    integrate_adaptive(|t| weight(t) * f(t), 0.0, cone.angular_extent(), &q).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn shifted_index_identity(cone in any_cone()) {
        let s = spec(&cone, 8);
        let shift = 0.5 * cone.dimension() as f64 - 1.0;
        for m in &s.modes {
            prop_assert!((m.alpha * m.alpha - m.lambda - shift * shift).abs() <= 1e-12 * m.lambda.max(1.0));
            prop_assert!((m.p - (m.alpha - shift)).abs() < 1e-12 * m.alpha.max(1.0));
        }
    }

    #[test]
    fn eigenvalues_strictly_increase(cone in any_cone()) {
        let s = spec(&cone, 8);
        prop_assert!(s.modes.windows(2).all(|w| w[1].lambda > w[0].lambda));
    }

    #[test]
    fn index_grows_linearly(cone in any_cone()) {
        // only axially symmetric modes are listed, so α_j grows like j in
        // every dimension
        let s = spec(&cone, 12);
        let ratios: Vec<f64> = s.modes.iter().map(|m| m.alpha / m.index as f64).collect();
        let (lo, hi) = ratios.iter().fold((f64::MAX, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
        prop_assert!(lo > 0.0 && hi / lo < 5.0, "{ratios:?}");
    }

    #[test]
    fn orthonormal_modes(theta0 in 0.4f64..2.8, aperture in 0.4f64..6.0) {
        for cone in [ConeFamily::circular_cone(theta0).unwrap(), ConeFamily::wedge(aperture).unwrap()] {
            let s = spec(&cone, 4);
            for a in &s.modes {
                for b in &s.modes {
                    let g = over_domain(&cone, |t| a.value(t) * b.value(t));
                    let delta = if a.index == b.index { 1.0 } else { 0.0 };
                    prop_assert!((g - delta).abs() < 1e-8, "{cone} {} {}: {g}", a.index, b.index);
                }
            }
        }
    }

    #[test]
    fn legendre_roots(theta0 in 0.3f64..2.9) {
        let cone = ConeFamily::circular_cone(theta0).unwrap();
        for m in &spec(&cone, 6).modes {
            let nu = m.alpha - 0.5;
            prop_assert!(legendre_p(nu, theta0.cos()).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn bessel_recurrence(nu in 1.0f64..8.0, z in 0.1f64..20.0) {
        let h = 1e-5 * z.max(1.0);
        let fd = (bessel_i(nu, z + h).unwrap() - bessel_i(nu, z - h).unwrap()) / (2.0 * h);
        let rec = 0.5 * (bessel_i(nu - 1.0, z).unwrap() + bessel_i(nu + 1.0, z).unwrap());
        prop_assert!((fd / rec - 1.0).abs() < 1e-6);
    }

    #[test]
    fn bessel_growth_bound(nu in 0.5f64..20.0, z in 0.01f64..30.0) {
        let ln_bound = 1.1f64.ln() + nu * (0.5 * z).ln() + nu + z - nu * (nu + 0.5).ln();
        prop_assert!(bessel_i(nu, z).unwrap().ln() <= ln_bound);
    }

    #[test]
    fn brownian_scaling(rho in 0.2f64..5.0, s in 0.1f64..10.0, u in prop_oneof![0.05f64..0.6, 1.6f64..40.0]) {
        let cone = ConeFamily::wedge(2.0).unwrap();
        let sp = spec(&cone, cone.max_terms());
        let x = PolarPoint { rho, theta: 0.7 };
        let y = PolarPoint { rho: s * rho, theta: 0.7 };
        let a = exit_radial_density(&sp, &x, u * rho, 1e-10).unwrap();
        let b = exit_radial_density(&sp, &y, u * s * rho, 1e-10).unwrap();
        prop_assert!((a / (s * b) - 1.0).abs() < 1e-8);
        let t = u * rho * rho;
        let p = survival(&sp, &x, t, 1e-10).unwrap();
        let q = survival(&sp, &y, t * s * s, 1e-10).unwrap();
        prop_assert!((p - q).abs() < 1e-8);
    }

    #[test]
    fn survival_is_a_probability_decreasing_in_time(t in 0.01f64..100.0, k in 1.01f64..10.0) {
        let cone = ConeFamily::circular_cone(1.0).unwrap();
        let sp = spec(&cone, cone.max_terms());
        let x = PolarPoint { rho: 1.0, theta: 0.3 };
        let a = survival(&sp, &x, t, 1e-9).unwrap();
        let b = survival(&sp, &x, k * t, 1e-9).unwrap();
        prop_assert!((0.0..=1.0).contains(&a) && b <= a + 1e-12);
    }

    #[test]
    fn tail_derivative_is_density(r in 1.3f64..30.0) {
        let cone = ConeFamily::wedge(1.2).unwrap();
        let law = RadialLaw::new(spec(&cone, cone.max_terms()), PolarPoint { rho: 1.0, theta: 0.4 }, 1e-11).unwrap();
        let h = 1e-4 * r;
        let fd = -(law.tail(r + h).unwrap() - law.tail(r - h).unwrap()) / (2.0 * h);
        let d = law.density(r).unwrap();
        prop_assert!((fd - d).abs() < 1e-6 * d.max(1e-3), "{fd} {d}");
    }

    #[test]
    fn doubling_terms_changes_little(r in prop_oneof![0.1f64..0.7, 1.5f64..20.0], theta in 0.2f64..1.0) {
        let cone = ConeFamily::wedge(1.2).unwrap();
        let x = PolarPoint { rho: 1.0, theta };
        let tol = 1e-9;
        let a = exit_radial_density(&spec(&cone, 60), &x, r, tol);
        let b = exit_radial_density(&spec(&cone, 120), &x, r, tol).unwrap();
        if let Ok(a) = a {
            prop_assert!((a - b).abs() <= 2.0 * tol * b.abs());
        }
    }

    #[test]
    fn side_probabilities_complement(u in 1e-3f64..1e3, v in 1e-3f64..1e3) {
        let p = exit_side_probability(u, v).unwrap();
        let q = exit_side_probability(v, u).unwrap();
        prop_assert!(p > 0.0 && p < 1.0 && (p + q - 1.0).abs() < 1e-15);
        // the sampler's side rule thresholds a uniform at P(minus)
        prop_assert_eq!(select_side(u, v, 0.5 * p), Side::Minus);
        prop_assert_eq!(select_side(u, v, p + 0.5 * (1.0 - p)), Side::Plus);
    }

    #[test]
    fn ks_distance_in_unit_interval(xs in prop::collection::vec(-5.0f64..5.0, 1..50)) {
        let d = ks_distance(&xs, |x| 0.5 + x.atan() / PI).unwrap();
        prop_assert!((0.0..=1.0).contains(&d));
    }
}
