//! Exit place of iterated Brownian motion `Z_t = X(Y_t)`: X is a two-sided
//! Brownian motion in the cone's space, Y an independent one-dimensional
//! Brownian clock.

mod asymptote;
mod clock;
mod density;

pub use asymptote::{exit_side_probability, ibm_asymptote, ibm_tail, moment_finite, IbmAsymptote, Regime, CRITICAL_TOLERANCE};
pub use clock::{ClockKernel, SurvivalTable};
pub use density::{ibm_radial_density, IbmExitLaw};
