//! Exit-place and exit-time laws for Brownian motion and iterated Brownian
//! motion in generalized cones.
//!
//! * [`cone`]: cone families and their Dirichlet spectral data.
//! * [`special`]: gamma, modified Bessel, Legendre and Kummer functions,
//!   adaptive quadrature and distribution functions tabulated from densities.
//! * [`bm`]: heat kernel, joint exit law, radial exit density and tail,
//!   survival function and mean exit time of Brownian motion.
//! * [`ibm`]: exit-place density, tail asymptotics and moment criterion for
//!   iterated Brownian motion.
//! * [`mc`]: Monte Carlo samplers and estimators used as independent checks.

pub mod cone;
pub mod bm;
pub mod error;
pub mod ibm;
pub mod mc;
pub mod special;

pub use cone::{spectrum, BoundaryWeight, ConeFamily, Mode, PolarPoint, SpectralData};
pub use error::{Error, Result};
