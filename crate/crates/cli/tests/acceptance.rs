//! Acceptance suite. Each criterion writes one PASS/FAIL line to standard
//! error (uncaptured, so it shows in the normal test log) and then asserts.

use std::f64::consts::PI;
use std::io::Write;
use std::process::Command;
use std::time::Instant;

use cone_exit::bm::{exit_radial_density, RadialLaw};
use cone_exit::ibm::{moment_finite, IbmExitLaw};
use cone_exit::mc::{
    estimate_tail_exponent, ks_critical_1pct, ks_distance, simulate, Process, SampleBatch, SamplerConfig,
    SimulationSpec, TailFit,
};
use cone_exit::special::{
    bessel_i_scaled, gamma, integrate_adaptive, laplace_bessel, laplace_bessel_ratio, QuadratureSpec, TabulatedCdf,
};
use cone_exit::{spectrum, BoundaryWeight, ConeFamily, PolarPoint, SpectralData};

const H: f64 = 1e-3;
const SEED: u64 = 20_240_601;
const WORKERS: usize = 8;

fn report(id: u32, pass: bool, detail: &str, started: Instant) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!(
        "acceptance {id:>2}: {verdict}  {detail}  [{:.1} s]\n",
        started.elapsed().as_secs_f64()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn spec_of(cone: &ConeFamily) -> SpectralData {
    spectrum(cone, cone.max_terms(), BoundaryWeight::Geometric).unwrap()
}

fn bisector_start(cone: &ConeFamily) -> PolarPoint {
    cone.interior_point(1.0, cone.bisector()).unwrap()
}

fn batch(cone: &ConeFamily, count: usize, seed: u64) -> SampleBatch {
    simulate(&SimulationSpec {
        cone: *cone,
        start: bisector_start(cone),
        process: Process::Ibm,
        count,
        sampler: SamplerConfig::new(H).unwrap(),
        seed,
        workers: WORKERS,
    })
    .unwrap()
}

fn fit_text(fit: &Result<TailFit, cone_exit::Error>) -> String {
    match fit {
        Ok(f) => format!("slope {:.3} ± {:.3} (n = {})", f.slope, f.stderr, f.tail_count),
        Err(e) => format!("{e}"),
    }
}

#[test]
fn criterion_01_cauchy_closed_loop() {
    let t0 = Instant::now();
    let cone = ConeFamily::wedge_pi_fraction(1, 1).unwrap();
    let spec = spec_of(&cone);
    let x = bisector_start(&cone);
    let mut worst = 0.0f64;
    for &r in &[0.25, 0.5, 2.0, 4.0, 8.0] {
        let d = exit_radial_density(&spec, &x, r, 1e-12).unwrap();
        let exact = 2.0 / (PI * (1.0 + r * r));
        worst = worst.max((d / exact - 1.0).abs());
    }
    let pass = worst <= 1e-8 && t0.elapsed().as_secs_f64() < 1.0;
    report(1, pass, &format!("max rel err {worst:.2e} (tol 1e-8)"), t0);
    assert!(pass);
}

#[test]
fn criterion_02_conformal_quarter_plane() {
    let t0 = Instant::now();
    let cone = ConeFamily::wedge_pi_fraction(1, 2).unwrap();
    let spec = spec_of(&cone);
    let x = bisector_start(&cone);
    // z ↦ z² sends the start to iρ² and each boundary ray onto a half-line
    let exact = |r: f64| 4.0 * r / (PI * (r.powi(4) + 1.0));
    let radii: Vec<f64> = (0..10)
        .map(|i| 0.05 * (0.6f64 / 0.05).powf(i as f64 / 9.0))
        .chain((0..10).map(|i| 1.6 * (60.0f64 / 1.6).powf(i as f64 / 9.0)))
        .collect();
    let mut worst = 0.0f64;
    for &r in &radii {
        assert!(2.0 * r / (1.0 + r * r) <= 0.9);
        let d = exit_radial_density(&spec, &x, r, 1e-10).unwrap();
        worst = worst.max((d / exact(r) - 1.0).abs());
    }
    let pass = worst <= 1e-5 && t0.elapsed().as_secs_f64() < 5.0;
    report(2, pass, &format!("max rel err {worst:.2e} over 20 radii (tol 1e-5)"), t0);
    assert!(pass);
}

#[test]
fn criterion_03_special_function_identities() {
    let t0 = Instant::now();
    let q = QuadratureSpec::new(1e-300, 1e-13, 2000).unwrap();
    // e^{-w} I_α(γw), kept finite for large w
    let scaled = |a: f64, g: f64, w: f64| bessel_i_scaled(a, g * w).unwrap_or(f64::NAN) * (-(1.0 - g) * w).exp();
    let mut worst = 0.0f64;
    for &a in &[0.5, 1.0, 2.0, 2.5, 7.0] {
        for k in 1..=9 {
            let g = 0.1 * k as f64;
            let plain = integrate_adaptive(|w| scaled(a, g, w), 0.0, f64::INFINITY, &q)
                .unwrap()
                .value;
            let ratio = integrate_adaptive(
                |w| if w == 0.0 { 0.0 } else { scaled(a, g, w) / w },
                0.0,
                f64::INFINITY,
                &q,
            )
            .unwrap()
            .value;
            worst = worst.max((laplace_bessel(a, g).unwrap() / plain - 1.0).abs());
            worst = worst.max((laplace_bessel_ratio(a, g).unwrap() / ratio - 1.0).abs());
        }
    }
    let mut dup = 0.0f64;
    for &z in &[0.25, 0.5, 1.0, 3.7] {
        let lhs = gamma(2.0 * z).unwrap();
        let rhs = (2.0 * PI).powf(-0.5) * 2f64.powf(2.0 * z - 0.5) * gamma(z).unwrap() * gamma(z + 0.5).unwrap();
        dup = dup.max((lhs / rhs - 1.0).abs());
    }
    let pass = worst <= 1e-9 && dup <= 1e-12 && t0.elapsed().as_secs_f64() < 5.0;
    report(
        3,
        pass,
        &format!("closed forms vs quadrature {worst:.2e} (tol 1e-9), duplication {dup:.2e} (tol 1e-12)"),
        t0,
    );
    assert!(pass);
}

#[test]
fn criterion_04_normalization() {
    let t0 = Instant::now();
    let cones = [
        ConeFamily::wedge_pi_fraction(1, 1).unwrap(),
        ConeFamily::wedge_pi_fraction(1, 2).unwrap(),
        ConeFamily::circular_cone(PI / 3.0).unwrap(),
    ];
    let mut parts = Vec::new();
    let mut pass = true;
    for cone in &cones {
        let law = RadialLaw::new(spec_of(cone), bisector_start(cone), 1e-9).unwrap();
        let far = 1e3;
        let total = law.mass(0.0, far).unwrap() + law.tail(far).unwrap();
        pass &= (total - 1.0).abs() <= 1e-3;
        parts.push(format!("{cone}: {total:.7}"));
    }
    pass &= t0.elapsed().as_secs_f64() < 30.0;
    report(4, pass, &format!("{} (tol 1e-3)", parts.join(", ")), t0);
    assert!(pass);
}

#[test]
fn criterion_05_tail_constant() {
    let t0 = Instant::now();
    let mut parts = Vec::new();
    let mut pass = true;
    for (cone, expected) in [
        (ConeFamily::wedge_pi_fraction(1, 1).unwrap(), Some(2.0 / PI)),
        (ConeFamily::wedge_pi_fraction(2, 3).unwrap(), None),
    ] {
        let law = RadialLaw::new(spec_of(&cone), bisector_start(&cone), 1e-10).unwrap();
        let asym = law.asymptote();
        let r: f64 = 50.0;
        let scaled = r.powf(asym.exponent) * law.tail(r).unwrap();
        let rel = (scaled / asym.constant - 1.0).abs();
        pass &= rel <= 0.02;
        if let Some(k) = expected {
            pass &= (asym.constant / k - 1.0).abs() <= 1e-10;
        }
        parts.push(format!("{cone}: K = {:.6}, r^p·tail = {scaled:.6}, rel {rel:.2e}", asym.constant));
    }
    pass &= t0.elapsed().as_secs_f64() < 30.0;
    report(5, pass, &format!("{} (tol 2%)", parts.join("; ")), t0);
    assert!(pass);
}

#[test]
fn criterion_06_ibm_exit_place_exponents() {
    let t0 = Instant::now();
    let n = 1_000_000;
    let cases = [
        (ConeFamily::wedge_pi_fraction(1, 1).unwrap(), -2.0, 0.1),
        (ConeFamily::wedge_pi_fraction(1, 4).unwrap(), -6.0, 0.2),
    ];
    let mut parts = Vec::new();
    let mut pass = true;
    for (i, (cone, expected, tol)) in cases.iter().enumerate() {
        let radii = batch(cone, n, SEED + i as u64).radii();
        let fit = estimate_tail_exponent(&radii, 8.0, 128.0);
        pass &= matches!(&fit, Ok(f) if (f.slope - expected).abs() <= *tol);
        parts.push(format!("{cone}: {} vs {expected} ± {tol}", fit_text(&fit)));
    }
    let critical = ConeFamily::wedge_pi_fraction(1, 2).unwrap();
    let radii = batch(&critical, n, SEED + 2).radii();
    let fit = estimate_tail_exponent(&radii, 8.0, 128.0);
    pass &= matches!(&fit, Ok(f) if f.slope > -4.4 && f.slope < -3.8);
    parts.push(format!("{critical}: {} vs (-4.4, -3.8)", fit_text(&fit)));
    report(6, pass, &parts.join("; "), t0);
    assert!(pass);
}

#[test]
fn criterion_07_series_vs_mc_ks() {
    let t0 = Instant::now();
    let cone = ConeFamily::wedge_pi_fraction(1, 1).unwrap();
    let law = IbmExitLaw::new(spec_of(&cone), bisector_start(&cone), 1e-8).unwrap();
    let (a, b) = (2.0, 64.0);
    let cdf = TabulatedCdf::from_density(|r| law.density(r), a, b, 256).unwrap();
    let radii = batch(&cone, 100_000, SEED + 7).radii();
    let inside: Vec<f64> = radii.into_iter().filter(|&r| r >= a && r <= b).collect();
    let d = ks_distance(&inside, |r| cdf.eval_conditional(r)).unwrap();
    let critical = ks_critical_1pct(inside.len());
    let envelope = 0.05 * H.sqrt();
    let pass = d < critical + envelope;
    report(
        7,
        pass,
        &format!(
            "KS {d:.5} on {} samples in [2, 64] vs {critical:.5} + {envelope:.5}",
            inside.len()
        ),
        t0,
    );
    assert!(pass);
}

#[test]
fn criterion_08_ibm_exit_time_exponents() {
    let t0 = Instant::now();
    let cases = [
        (ConeFamily::wedge_pi_fraction(1, 1).unwrap(), 10.0, 1e4, 0.1),
        (ConeFamily::wedge_pi_fraction(1, 4).unwrap(), 0.5, 5.0, 0.2),
    ];
    let mut parts = Vec::new();
    let mut pass = true;
    for (i, (cone, lo, hi, tol)) in cases.iter().enumerate() {
        let p1 = spec_of(cone).p1();
        let expected = if p1 < 2.0 { -0.5 * p1 } else { -0.5 * (p1 + 1.0) };
        let times = batch(cone, 100_000, SEED + 11 + i as u64).times();
        let fit = estimate_tail_exponent(&times, *lo, *hi);
        pass &= matches!(&fit, Ok(f) if (f.slope - expected).abs() <= *tol);
        parts.push(format!("{cone} on t in [{lo}, {hi}]: {} vs {expected} ± {tol}", fit_text(&fit)));
    }
    report(8, pass, &parts.join("; "), t0);
    assert!(pass);
}

#[test]
fn criterion_09_moment_criterion() {
    let t0 = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for (num, den) in [(1, 1), (1, 2), (1, 4)] {
        let cone = ConeFamily::wedge_pi_fraction(num, den).unwrap();
        let law = IbmExitLaw::new(spec_of(&cone), bisector_start(&cone), 1e-8).unwrap();
        let tail = law.asymptote().tail();
        // E|Z|^p < ∞ iff ∫ r^{p-1} P(|Z| > r) dr < ∞; a log factor makes the
        // boundary case divergent as well
        for k in 1..=40 {
            let p = 0.25 * k as f64;
            let predicted = p < tail.exponent;
            let agree = moment_finite(&cone, p).unwrap() == predicted;
            pass &= agree;
        }
        parts.push(format!("{cone}: finite iff p < {}", tail.exponent));
    }
    report(9, pass, &parts.join(", "), t0);
    assert!(pass);
}

#[test]
fn criterion_10_determinism() {
    let t0 = Instant::now();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_cone-exit"))
            .args(["simulate", "--cone", "wedge:a=pi/3", "--n", "2000", "--seed", "42", "--workers", "4"])
            .args(["--process", "ibm"])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    let pass = a.status.success() && b.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout;
    report(10, pass, &format!("{} bytes, identical = {}", a.stdout.len(), a.stdout == b.stdout), t0);
    assert!(pass);
}
