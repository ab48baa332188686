//! Command-line configuration. The parsed configuration is serialized into
//! JSON output as provenance.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cone_exit::cone::ConeFamily;
use cone_exit::mc::{Process as McProcess, SamplerConfig, StepControl, DEFAULT_KAPPA};
use cone_exit::{BoundaryWeight, PolarPoint};

use crate::error::CliError;

/// Exit laws of Brownian motion and iterated Brownian motion in cones.
#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "cone-exit", version, about)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "lowercase", tag = "name")]
pub enum Command {
    /// Table of λ_j, α_j, p_j and the boundary and interior functionals.
    Spectrum(SpectrumArgs),
    /// Radial exit density over a grid of radii.
    Density(GridCommand),
    /// Exit-radius tail over a grid of radii, with its asymptote.
    Tail(GridCommand),
    /// Survival function of the exit time and its asymptotic constant.
    Survival(SurvivalArgs),
    /// Far-field regime, exponents and constant.
    Asymptote(AsymptoteArgs),
    /// Draw a batch of Monte Carlo exit samples.
    Simulate(SimulateArgs),
    /// Series against Monte Carlo: KS distance and tail-exponent fit.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Process {
    Bm,
    Ibm,
}

impl From<Process> for McProcess {
    fn from(p: Process) -> Self {
        match p {
            Process::Bm => McProcess::Bm,
            Process::Ibm => McProcess::Ibm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weight {
    Geometric,
    AxisSine,
}

impl From<Weight> for BoundaryWeight {
    fn from(w: Weight) -> Self {
        match w {
            Weight::Geometric => BoundaryWeight::Geometric,
            Weight::AxisSine => BoundaryWeight::AxisSine,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConeArgs {
    /// Cone: wedge:a=<rad>, halfspace:n=<int> or cone3d:theta0=<rad>;
    /// angles may be written as pi multiples such as pi/4.
    #[arg(long)]
    pub cone: String,

    /// Number of modes J available to the series.
    #[arg(long)]
    pub terms: Option<usize>,

    /// Normalization of the boundary functional.
    #[arg(long, value_enum, default_value_t = Weight::Geometric)]
    pub boundary_weight: Weight,
}

impl ConeArgs {
    pub fn family(&self) -> Result<ConeFamily, CliError> {
        Ok(self.cone.parse()?)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StartArgs {
    /// Distance of the start point from the vertex.
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,

    /// Angular coordinate of the start point in radians, or `bisector`
    /// (a/2 for wedges, the axis otherwise).
    #[arg(long, default_value = "bisector")]
    pub theta: String,
}

impl StartArgs {
    pub fn point(&self, cone: &ConeFamily) -> Result<PolarPoint, CliError> {
        let theta = if self.theta.trim().eq_ignore_ascii_case("bisector") {
            cone.bisector()
        } else {
            self.theta
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("theta must be radians or 'bisector', got '{}'", self.theta)))?
        };
        Ok(cone.interior_point(self.rho, theta)?)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TolArgs {
    /// Relative tolerance of the series and quadratures.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

impl TolArgs {
    pub fn validated(&self) -> Result<f64, CliError> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(CliError::Config(format!("tol must lie in (0, 1), got {}", self.tol)));
        }
        Ok(self.tol)
    }
}

/// Grid given either as explicit values or as start/stop/count.
#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    /// Explicit comma-separated grid values.
    #[arg(long = "at", value_delimiter = ',', num_args = 1..)]
    pub values: Vec<f64>,

    #[arg(long)]
    pub start: Option<f64>,

    #[arg(long)]
    pub stop: Option<f64>,

    #[arg(long, default_value_t = 20)]
    pub count: usize,

    /// Space the grid geometrically.
    #[arg(long)]
    pub log: bool,
}

impl GridArgs {
    pub fn points(&self, what: &str) -> Result<Vec<f64>, CliError> {
        let points = if !self.values.is_empty() {
            self.values.clone()
        } else {
            let (Some(a), Some(b)) = (self.start, self.stop) else {
                return Err(CliError::Config(format!("{what} grid needs --at or both --start and --stop")));
            };
            if self.count < 2 {
                return Err(CliError::Config(format!("{what} grid needs --count >= 2")));
            }
            if self.log && !(a > 0.0) {
                return Err(CliError::Config(format!("log {what} grid needs a positive start")));
            }
            (0..self.count)
                .map(|i| {
                    let u = i as f64 / (self.count - 1) as f64;
                    if self.log {
                        a * (b / a).powf(u)
                    } else {
                        a + (b - a) * u
                    }
                })
                .collect()
        };
        if points.iter().any(|v| !v.is_finite()) || points.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CliError::Config(format!("{what} grid must be finite and strictly increasing")));
        }
        Ok(points)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridCommand {
    #[command(flatten)]
    pub cone: ConeArgs,
    #[command(flatten)]
    pub start: StartArgs,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long, value_enum, default_value_t = Process::Bm)]
    pub process: Process,
    /// Single radius; shorthand for `--at`.
    #[arg(long)]
    pub r: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
}

impl GridCommand {
    pub fn radii(&self) -> Result<Vec<f64>, CliError> {
        match self.r {
            Some(r) if self.grid.values.is_empty() && self.grid.start.is_none() => Ok(vec![r]),
            Some(_) => Err(CliError::Config("give either --r or a grid, not both".into())),
            None => self.grid.points("radius"),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SurvivalArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    #[command(flatten)]
    pub start: StartArgs,
    #[command(flatten)]
    pub tol: TolArgs,
    /// Single time; shorthand for `--at`.
    #[arg(long)]
    pub t: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
}

impl SurvivalArgs {
    pub fn times(&self) -> Result<Vec<f64>, CliError> {
        match self.t {
            Some(t) if self.grid.values.is_empty() && self.grid.start.is_none() => Ok(vec![t]),
            Some(_) => Err(CliError::Config("give either --t or a grid, not both".into())),
            None => self.grid.points("time"),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AsymptoteArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    #[command(flatten)]
    pub start: StartArgs,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long, value_enum, default_value_t = Process::Ibm)]
    pub process: Process,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepRule {
    Fixed,
    Adaptive,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct McArgs {
    /// Number of samples N.
    #[arg(long = "n", short = 'n', visible_alias = "samples", default_value_t = 10_000)]
    pub samples: usize,

    /// Step size h (variance of each coordinate increment at the finest scale).
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Number of RNG streams; fixes the output together with the seed.
    #[arg(long, env = "CONE_EXIT_WORKERS", default_value_t = 8)]
    pub workers: usize,

    #[arg(long, value_enum, default_value_t = StepRule::Adaptive)]
    pub step: StepRule,

    /// Step-to-distance ratio of the adaptive rule.
    #[arg(long, default_value_t = DEFAULT_KAPPA)]
    pub kappa: f64,

    /// Per-path step budget.
    #[arg(long)]
    pub max_steps: Option<u64>,
}

impl McArgs {
    pub fn sampler(&self) -> Result<SamplerConfig, CliError> {
        if self.samples == 0 {
            return Err(CliError::Config("N must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        let step = match self.step {
            StepRule::Fixed => StepControl::Fixed,
            StepRule::Adaptive => StepControl::Adaptive { kappa: self.kappa },
        };
        let mut config = SamplerConfig::new(self.h)?.with_step(step)?;
        if let Some(m) = self.max_steps {
            config = config.with_max_steps(m)?;
        }
        Ok(config)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    #[command(flatten)]
    pub start: StartArgs,
    #[arg(long, value_enum, default_value_t = Process::Bm)]
    pub process: Process,
    #[command(flatten)]
    pub mc: McArgs,
    /// Where to write the JSON batch header; defaults to
    /// `<output>.header.json` when `--output` is given.
    #[arg(long)]
    pub header: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompareArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    #[command(flatten)]
    pub start: StartArgs,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long, value_enum, default_value_t = Process::Bm)]
    pub process: Process,
    #[command(flatten)]
    pub mc: McArgs,
    /// Read samples written by `simulate` instead of drawing new ones; cone,
    /// start and process are then taken from the batch header.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Header of `--input`; defaults to `<input>.header.json`.
    #[arg(long)]
    pub input_header: Option<PathBuf>,
    /// KS window in units of ρ.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [2.0, 64.0])]
    pub ks_window: Vec<f64>,
    /// Tail-fit window in units of ρ.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [8.0, 128.0])]
    pub fit_window: Vec<f64>,
    /// Allowed deviation of the fitted slope from the predicted one.
    #[arg(long, default_value_t = 0.2)]
    pub slope_tol: f64,
}
