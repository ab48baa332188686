use std::f64::consts::PI;

use cone_exit::ibm::{ibm_radial_density, IbmExitLaw, Regime};
use cone_exit::{spectrum, BoundaryWeight, ConeFamily, PolarPoint};

fn law(num: u32, den: u32) -> IbmExitLaw {
    let cone = ConeFamily::wedge_pi_fraction(num, den).unwrap();
    let s = spectrum(&cone, cone.max_terms(), BoundaryWeight::Geometric).unwrap();
    let z = PolarPoint { rho: 1.0, theta: cone.bisector() };
    IbmExitLaw::new(s, z, 1e-8).unwrap()
}

#[test]
fn leading_mode_dominates_far_out() {
    let l = law(1, 1);
    let terms = l.mode_terms(32.0).unwrap();
    let rest: f64 = terms[1..].iter().sum();
    assert!((rest / terms[0]).abs() < 0.05, "{}", rest / terms[0]);
}

#[test]
fn far_field_slopes() {
    for (num, den, regime, expected) in [(1, 1, Regime::Sub, -3.0), (1, 2, Regime::Critical, -5.0), (1, 4, Regime::Super, -7.0)] {
        let l = law(num, den);
        assert_eq!(l.asymptote().regime, regime);
        let (a, b) = (32.0f64, 128.0f64);
        let mut fa = l.density(a).unwrap();
        let mut fb = l.density(b).unwrap();
        if regime == Regime::Critical {
            fa /= a.ln();
            fb /= b.ln();
        }
        let slope = (fb / fa).ln() / (b / a).ln();
        assert!((slope - expected).abs() < 0.15, "{num}/{den}: {slope}");
    }
}

#[test]
fn half_plane_density_near_asymptote() {
    let l = law(1, 1);
    let r = 64.0f64;
    let d = l.density(r).unwrap();
    assert!((d / (2.0 * r.powi(-3)) - 1.0).abs() < 0.1, "{d}");
}

#[test]
fn densities_integrate_to_one() {
    for (num, den) in [(1, 1), (1, 2), (1, 4)] {
        let l = law(num, den);
        let far = 200.0;
        let total = l.mass(1e-9, far).unwrap() + l.tail(far).unwrap();
        assert!((total - 1.0).abs() < 5e-3, "{num}/{den}: {total}");
    }
}

#[test]
fn doubling_terms_changes_little() {
    let cone = ConeFamily::wedge_pi_fraction(2, 3).unwrap();
    let z = PolarPoint { rho: 1.0, theta: PI / 3.0 };
    let tol = 1e-7;
    for r in [0.2, 0.5, 2.5, 10.0] {
        let a = ibm_radial_density(&spectrum(&cone, 100, BoundaryWeight::Geometric).unwrap(), &z, r, tol).unwrap();
        let b = ibm_radial_density(&spectrum(&cone, 200, BoundaryWeight::Geometric).unwrap(), &z, r, tol).unwrap();
        assert!((a - b).abs() <= tol * b, "{r}: {a} {b}");
    }
}

#[test]
fn thinner_than_brownian_beyond_start() {
    // the clock averages the Brownian law over times, which shifts mass
    // towards the start radius in every regime
    let l = law(1, 1);
    let cauchy_tail = |r: f64| 1.0 - 2.0 / PI * r.atan();
    for r in [4.0, 16.0, 64.0] {
        assert!(l.tail(r).unwrap() < cauchy_tail(r));
    }
}
