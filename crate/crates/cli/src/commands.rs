use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::json;

use cone_exit::bm::{mean_exit_time, RadialLaw, SurvivalCurve};
use cone_exit::ibm::IbmExitLaw;
use cone_exit::mc::{estimate_tail_exponent, ks_critical_1pct, ks_distance, simulate, SampleBatch, SimulationSpec};
use cone_exit::special::TabulatedCdf;
use cone_exit::{spectrum, ConeFamily, PolarPoint, SpectralData};

use crate::config::{
    AsymptoteArgs, CompareArgs, ConeArgs, Format, GridCommand, Process, RunConfig, SimulateArgs, SpectrumArgs,
    SurvivalArgs,
};
use crate::error::CliError;
use crate::table::{to_value, Table};

const SPECTRUM_DEFAULT_TERMS: usize = 10;
const KS_INTERVALS: usize = 256;

/// Output of a subcommand.
pub enum Report {
    Table(Table),
    /// Already rendered; written verbatim.
    Raw(Vec<u8>),
}

fn spectral_data(args: &ConeArgs, default_terms: Option<usize>) -> Result<SpectralData, CliError> {
    let cone = args.family()?;
    let terms = args.terms.or(default_terms).unwrap_or_else(|| cone.max_terms());
    if terms == 0 {
        return Err(CliError::Config("terms must be at least 1".into()));
    }
    Ok(spectrum(&cone, terms, args.boundary_weight.into())?)
}

fn describe(t: &mut Table, cone: &ConeFamily, start: &PolarPoint) {
    t.note("cone", cone.to_string());
    t.note("rho", start.rho);
    t.note("theta", start.theta);
}

pub fn spectrum_table(args: &SpectrumArgs) -> Result<Table, CliError> {
    let spec = spectral_data(&args.cone, Some(SPECTRUM_DEFAULT_TERMS))?;
    let mut t = Table::new(&["j", "lambda", "alpha", "p", "S", "D"]);
    t.note("cone", spec.cone.to_string());
    t.note("p1", spec.p1());
    for m in &spec.modes {
        t.push(vec![
            m.index.into(),
            m.lambda.into(),
            m.alpha.into(),
            m.p.into(),
            m.boundary_functional.into(),
            m.interior_functional.into(),
        ]);
    }
    Ok(t)
}

enum Law {
    Bm(RadialLaw),
    Ibm(Box<IbmExitLaw>),
}

impl Law {
    fn new(process: Process, spec: SpectralData, start: PolarPoint, tol: f64) -> Result<Self, CliError> {
        Ok(match process {
            Process::Bm => Law::Bm(RadialLaw::new(spec, start, tol)?),
            Process::Ibm => Law::Ibm(Box::new(IbmExitLaw::new(spec, start, tol)?)),
        })
    }

    fn density(&self, r: f64) -> cone_exit::Result<f64> {
        match self {
            Law::Bm(l) => l.density(r),
            Law::Ibm(l) => l.density(r),
        }
    }

    fn tail(&self, r: f64) -> cone_exit::Result<f64> {
        match self {
            Law::Bm(l) => l.tail(r),
            Law::Ibm(l) => l.tail(r),
        }
    }

    fn asymptote(&self) -> cone_exit::bm::TailAsymptote {
        match self {
            Law::Bm(l) => l.asymptote(),
            Law::Ibm(l) => l.asymptote().tail(),
        }
    }

    fn density_asymptote(&self, r: f64) -> f64 {
        match self {
            Law::Bm(l) => {
                let a = l.asymptote();
                a.constant * a.exponent * r.powf(-a.exponent - 1.0)
            }
            Law::Ibm(l) => l.asymptote().density(r),
        }
    }
}

fn grid_setup(args: &GridCommand) -> Result<(Law, Vec<f64>, Table), CliError> {
    let tol = args.tol.validated()?;
    let radii = args.radii()?;
    if radii[0] <= 0.0 {
        return Err(CliError::Config("radii must be positive".into()));
    }
    let spec = spectral_data(&args.cone, None)?;
    let start = args.start.point(&spec.cone)?;
    let mut t = Table::default();
    describe(&mut t, &spec.cone, &start);
    t.note("process", format!("{:?}", args.process).to_lowercase());
    Ok((Law::new(args.process, spec, start, tol)?, radii, t))
}

pub fn density_table(args: &GridCommand) -> Result<Table, CliError> {
    let (law, radii, mut t) = grid_setup(args)?;
    t.columns = vec!["r".into(), "density".into(), "asymptotic".into()];
    for r in radii {
        t.push(vec![r.into(), law.density(r)?.into(), law.density_asymptote(r).into()]);
    }
    Ok(t)
}

pub fn tail_table(args: &GridCommand) -> Result<Table, CliError> {
    let (law, radii, mut t) = grid_setup(args)?;
    let asym = law.asymptote();
    t.note("tail_exponent", asym.exponent);
    t.note("tail_constant", asym.constant);
    t.note("log_correction", asym.log_correction);
    t.columns = vec!["r".into(), "tail".into(), "asymptotic".into()];
    for r in radii {
        t.push(vec![r.into(), law.tail(r)?.into(), asym.eval(r).into()]);
    }
    Ok(t)
}

pub fn survival_table(args: &SurvivalArgs) -> Result<Table, CliError> {
    let tol = args.tol.validated()?;
    let times = args.times()?;
    if times[0] <= 0.0 {
        return Err(CliError::Config("times must be positive".into()));
    }
    let spec = spectral_data(&args.cone, None)?;
    let start = args.start.point(&spec.cone)?;
    let mut t = Table::new(&["t", "survival", "asymptotic"]);
    describe(&mut t, &spec.cone, &start);
    let curve = SurvivalCurve::new(spec.clone(), start, tol)?;
    t.note("exponent", curve.exponent());
    t.note("constant", curve.constant());
    if spec.p1() > 2.0 {
        t.note("mean_exit_time", mean_exit_time(&spec, &start, tol)?);
    } else {
        t.note("mean_exit_time", "inf");
    }
    for time in times {
        t.push(vec![time.into(), curve.eval(time)?.into(), curve.asymptotic(time).into()]);
    }
    Ok(t)
}

pub fn asymptote_table(args: &AsymptoteArgs) -> Result<Table, CliError> {
    let tol = args.tol.validated()?;
    let spec = spectral_data(&args.cone, None)?;
    let start = args.start.point(&spec.cone)?;
    let mut t = Table::new(&["quantity", "value"]);
    describe(&mut t, &spec.cone, &start);
    let p1 = spec.p1();
    match args.process {
        Process::Bm => {
            let law = RadialLaw::new(spec, start, tol)?;
            let a = law.asymptote();
            t.push(vec!["process".into(), "bm".into()]);
            t.push(vec!["p1".into(), p1.into()]);
            t.push(vec!["density_exponent".into(), (a.exponent + 1.0).into()]);
            t.push(vec!["tail_exponent".into(), a.exponent.into()]);
            t.push(vec!["tail_constant".into(), a.constant.into()]);
        }
        Process::Ibm => {
            let a = cone_exit::ibm::ibm_asymptote(&spec, &start, tol)?;
            let tail = a.tail();
            t.push(vec!["process".into(), "ibm".into()]);
            t.push(vec!["regime".into(), a.regime.to_string().into()]);
            t.push(vec!["p1".into(), p1.into()]);
            t.push(vec!["density_exponent".into(), a.density_exponent.into()]);
            t.push(vec!["tail_exponent".into(), a.tail_exponent.into()]);
            t.push(vec!["log_correction".into(), a.log_correction.into()]);
            t.push(vec!["density_constant".into(), a.constant.into()]);
            t.push(vec!["tail_constant".into(), tail.constant.into()]);
        }
    }
    Ok(t)
}

fn simulation_spec(
    cone: &ConeArgs,
    start: &crate::config::StartArgs,
    process: Process,
    mc: &crate::config::McArgs,
) -> Result<SimulationSpec, CliError> {
    let family = cone.family()?;
    let start = start.point(&family)?;
    Ok(SimulationSpec {
        cone: family,
        start,
        process: process.into(),
        count: mc.samples,
        sampler: mc.sampler()?,
        seed: mc.seed,
        workers: mc.workers,
    })
}

fn header_path(explicit: Option<&PathBuf>, data: Option<&PathBuf>) -> Option<PathBuf> {
    explicit.cloned().or_else(|| data.map(|p| with_suffix(p, ".header.json")))
}

fn with_suffix(p: &Path, suffix: &str) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn simulate_report(args: &SimulateArgs, config: &RunConfig) -> Result<Report, CliError> {
    let spec = simulation_spec(&args.cone, &args.start, args.process, &args.mc)?;
    let batch = simulate(&spec)?;
    let mut buf = Vec::new();
    match config.format {
        Format::Csv => {
            batch.write_csv(&mut buf)?;
            if let Some(path) = header_path(args.header.as_ref(), config.output.as_ref()) {
                let mut f = BufWriter::new(File::create(path)?);
                batch.write_header(&mut f)?;
                writeln!(f)?;
                f.flush()?;
            }
        }
        Format::Json => {
            let doc = json!({
                "config": to_value(config)?,
                "header": to_value(&batch.header)?,
                "samples": to_value(&batch.samples)?,
            });
            serde_json::to_writer_pretty(&mut buf, &doc)?;
            buf.push(b'\n');
        }
    }
    Ok(Report::Raw(buf))
}

fn load_batch(input: &Path, header: Option<&PathBuf>) -> Result<SampleBatch, CliError> {
    let header = header.cloned().unwrap_or_else(|| with_suffix(input, ".header.json"));
    let h = BufReader::new(File::open(&header)?);
    let rows = BufReader::new(File::open(input)?);
    Ok(SampleBatch::read(h, rows)?)
}

fn window(v: &[f64], what: &str) -> Result<(f64, f64), CliError> {
    match v {
        [lo, hi] if *lo > 0.0 && hi > lo && hi.is_finite() => Ok((*lo, *hi)),
        _ => Err(CliError::Config(format!("{what} window must be 0 < LO < HI"))),
    }
}

pub fn compare_table(args: &CompareArgs) -> Result<Table, CliError> {
    let tol = args.tol.validated()?;
    let (ks_lo, ks_hi) = window(&args.ks_window, "KS")?;
    let (fit_lo, fit_hi) = window(&args.fit_window, "fit")?;
    let (batch, process) = match &args.input {
        Some(input) => {
            let batch = load_batch(input, args.input_header.as_ref())?;
            let process = match batch.header.process {
                cone_exit::mc::Process::Bm => Process::Bm,
                cone_exit::mc::Process::Ibm => Process::Ibm,
            };
            (batch, process)
        }
        None => {
            let spec = simulation_spec(&args.cone, &args.start, args.process, &args.mc)?;
            (simulate(&spec)?, args.process)
        }
    };
    let cone: ConeFamily = batch.header.cone.parse()?;
    let start = batch.header.start;
    let terms = args.cone.terms.unwrap_or_else(|| cone.max_terms());
    let spec = spectrum(&cone, terms, args.cone.boundary_weight.into())?;
    let law = Law::new(process, spec, start, tol)?;
    let rho = start.rho;

    let mut t = Table::new(&["check", "statistic", "threshold", "pass"]);
    describe(&mut t, &cone, &start);
    t.note("process", format!("{:?}", process).to_lowercase());
    t.note("N", batch.samples.len());
    t.note("h", batch.header.h);
    t.note("resampled", batch.header.resampled as usize);

    let radii = batch.radii();
    let (a, b) = (ks_lo * rho, ks_hi * rho);
    let inside: Vec<f64> = radii.iter().copied().filter(|&r| r >= a && r <= b).collect();
    let cdf = TabulatedCdf::from_density(|r| law.density(r), a, b, KS_INTERVALS)?;
    let ks = ks_distance(&inside, |r| cdf.eval_conditional(r))?;
    let critical = ks_critical_1pct(inside.len()) + 0.05 * batch.header.h.sqrt();
    t.note("ks_samples", inside.len());
    t.push(vec!["ks_distance".into(), ks.into(), critical.into(), (ks < critical).into()]);

    let expected = -law.asymptote().exponent;
    match estimate_tail_exponent(&radii, fit_lo * rho, fit_hi * rho) {
        Ok(fit) => {
            t.note("fit_stderr", fit.stderr);
            t.note("fit_tail_count", fit.tail_count);
            t.note("expected_slope", expected);
            t.push(vec![
                "tail_slope".into(),
                fit.slope.into(),
                format!("{} +- {}", expected, args.slope_tol).into(),
                ((fit.slope - expected).abs() < args.slope_tol).into(),
            ]);
            t.push(vec![
                "power_law".into(),
                (fit.slope_high - fit.slope_low).into(),
                "consistent halves".into(),
                (!fit.non_power_law).into(),
            ]);
        }
        Err(cone_exit::Error::InsufficientTailData(msg)) => {
            t.note("fit_error", msg);
            t.push(vec!["tail_slope".into(), f64::NAN.into(), expected.into(), false.into()]);
        }
        Err(e) => return Err(e.into()),
    }
    Ok(t)
}
