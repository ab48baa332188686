//! Brownian motion in a cone: heat kernel, joint exit law, radial exit law,
//! survival function and mean exit time.

mod kernel;
mod radial;
mod series;
mod survival;

pub use kernel::{heat_kernel, joint_exit_density};
pub use radial::{
    bm_tail_asymptote, exit_radial_density, exit_radial_density_bridged, exit_radial_tail, RadialLaw, TailAsymptote,
    DEFAULT_EPS_MIN,
};
pub use survival::{mean_exit_time, survival, survival_asymptote, SurvivalCurve};


pub(crate) use kernel::{check_interior, check_positive, flux_time_integral};
pub(crate) use radial::{radial_prefactor, similarity};
pub(crate) use survival::short_time_limit;
