//! Scalar numerical building blocks: Gaussian functions, random streams,
//! quadrature, golden-section search, fixed-point iteration and quantiles.

pub mod normal;
pub mod quadrature;
pub mod rng;
pub mod scalar;
pub mod stats;

pub use normal::{erf, erfc, normal_cdf, normal_pdf, normal_sf, normal_sf_inv};
pub use quadrature::{integrate, integrate_with_breaks, QuadratureSpec};
pub use rng::Rng;
pub use scalar::{minimize_1d, solve_fixed_point};
pub use stats::{median_sorted, quantile_sorted, quartiles};
