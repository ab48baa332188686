//! Parallel batches of exit samples and their CSV/JSON serialization.
//!
//! Paths are split into `workers` contiguous blocks; worker w draws from
//! stream w of the seed and the blocks are concatenated in worker order, so
//! a batch depends only on (cone, start, sampler, seed, workers) and not on
//! how many threads actually ran.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone::{ConeFamily, PolarPoint};
use crate::error::{Error, Result};

use super::rng::RngSpec;
use super::sampler::{sample_bm_exit, sample_clock_exit, sample_ibm_exit, SamplerConfig};

/// Consecutive budget failures tolerated for a single path.
const MAX_RESAMPLES_PER_PATH: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Process {
    /// Brownian motion.
    Bm,
    /// Iterated Brownian motion. The exit place uses the exact side rule;
    /// the exit time comes from a walk of the clock on the same (τ⁻, τ⁺),
    /// so each column has the right law but the pair is not a joint draw.
    Ibm,
}

impl std::fmt::Display for Process {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Process::Bm => "bm",
            Process::Ibm => "ibm",
        })
    }
}

/// Everything that determines a batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSpec {
    pub cone: ConeFamily,
    pub start: PolarPoint,
    pub process: Process,
    pub count: usize,
    pub sampler: SamplerConfig,
    pub seed: u64,
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub exit_time: f64,
    pub exit_radius: f64,
    pub boundary_coord: f64,
    pub stream: u64,
    pub path_index: u64,
}

/// JSON header written alongside the CSV rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchHeader {
    pub cone: String,
    pub start: PolarPoint,
    pub process: Process,
    pub h: f64,
    pub sampler: SamplerConfig,
    pub seed: u64,
    pub workers: usize,
    #[serde(rename = "N")]
    pub count: usize,
    /// Paths redrawn after exhausting the step budget.
    pub resampled: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub header: BatchHeader,
    pub samples: Vec<Sample>,
}

impl SampleBatch {
    pub fn radii(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.exit_radius).collect()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.exit_time).collect()
    }

    pub fn write_header<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer_pretty(writer, &self.header).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for s in &self.samples {
            w.serialize(s).map_err(|e| Error::Parse(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn read<H: Read, C: Read>(header: H, rows: C) -> Result<Self> {
        let header: BatchHeader = serde_json::from_reader(header).map_err(|e| Error::Parse(e.to_string()))?;
        let samples = csv::Reader::from_reader(rows)
            .deserialize()
            .collect::<std::result::Result<Vec<Sample>, _>>()
            .map_err(|e| Error::Parse(e.to_string()))?;
        if samples.len() != header.count {
            return Err(Error::Parse(format!(
                "header announces {} samples, found {}",
                header.count,
                samples.len()
            )));
        }
        Ok(Self { header, samples })
    }
}

fn draw<R: rand::Rng>(spec: &SimulationSpec, rng: &mut R) -> Result<(f64, f64, f64)> {
    match spec.process {
        Process::Bm => {
            let e = sample_bm_exit(&spec.cone, &spec.start, &spec.sampler, rng)?;
            Ok((e.time, e.radius, e.boundary_coord))
        }
        Process::Ibm => {
            let e = sample_ibm_exit(&spec.cone, &spec.start, &spec.sampler, rng)?;
            let (time, _) = sample_clock_exit(e.tau_minus, e.tau_plus, &spec.sampler, rng)?;
            Ok((time, e.exit.radius, e.exit.boundary_coord))
        }
    }
}

fn run_worker(spec: &SimulationSpec, worker: usize) -> Result<(Vec<Sample>, u64)> {
    let lo = spec.count * worker / spec.workers;
    let hi = spec.count * (worker + 1) / spec.workers;
    let mut rng = RngSpec::new(spec.seed, worker as u64).rng();
    let mut out = Vec::with_capacity(hi - lo);
    let mut resampled = 0;
    for index in lo..hi {
        let mut failures = 0;
        let (exit_time, exit_radius, boundary_coord) = loop {
            match draw(spec, &mut rng) {
                Err(Error::StepBudget(_)) if failures < MAX_RESAMPLES_PER_PATH => {
                    failures += 1;
                    resampled += 1;
                }
                other => break other?,
            }
        };
        out.push(Sample {
            exit_time,
            exit_radius,
            boundary_coord,
            stream: worker as u64,
            path_index: index as u64,
        });
    }
    Ok((out, resampled))
}

/// Draws `spec.count` exits.
pub fn simulate(spec: &SimulationSpec) -> Result<SampleBatch> {
    spec.cone.interior_point(spec.start.rho, spec.start.theta)?;
    if spec.count == 0 || spec.workers == 0 {
        return Err(Error::Domain("sample count and worker count must be positive".into()));
    }
    let parts = (0..spec.workers)
        .into_par_iter()
        .map(|w| run_worker(spec, w))
        .collect::<Result<Vec<_>>>()?;
    let mut samples = Vec::with_capacity(spec.count);
    let mut resampled = 0;
    for (part, r) in parts {
        samples.extend(part);
        resampled += r;
    }
    Ok(SampleBatch {
        header: BatchHeader {
            cone: spec.cone.to_string(),
            start: spec.start,
            process: spec.process,
            h: spec.sampler.h,
            sampler: spec.sampler,
            seed: spec.seed,
            workers: spec.workers,
            count: spec.count,
            resampled,
        },
        samples,
    })
}
