//! Special functions and quadrature used throughout the crate.

mod bessel;
mod cdf;
mod gamma;
mod hypergeometric;
mod laplace;
mod quadrature;

pub use bessel::{bessel_i, bessel_i_scaled, ln_bessel_i};
pub use cdf::TabulatedCdf;
pub use gamma::{gamma, log_gamma};
pub use hypergeometric::{kummer_m_scaled, legendre_p, legendre_p_derivative, legendre_p_mehler};
pub use laplace::{beta_tail_integral, laplace_bessel, laplace_bessel_ratio, similarity_ratio};
pub use quadrature::{integrate_adaptive, integrate_pieces, Quadrature, QuadratureSpec};
pub(crate) use quadrature::integrate_pieces_fallible;
