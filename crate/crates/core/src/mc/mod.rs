//! Monte Carlo samplers and estimators: an independent check on the series.

mod batch;
mod estimate;
mod rng;
mod sampler;

pub use batch::{simulate, BatchHeader, Process, Sample, SampleBatch, SimulationSpec};
pub use estimate::{estimate_tail_exponent, ks_critical_1pct, ks_distance, TailFit, MIN_TAIL_SAMPLES};
pub use rng::{RngAlgorithm, RngSpec};
pub use sampler::{
    sample_bm_exit, sample_clock_exit, sample_ibm_exit, sample_ibm_exit_time, select_side, BmExit, IbmExit,
    SamplerConfig, Side, StepControl, DEFAULT_KAPPA, DEFAULT_MAX_STEPS,
};
