//! Numerical laboratory for maximal modulations of the Hilbert transform along the parabola,
//! restricted to lines.
//!
//! The core is generic over [`Real`] (`f32` or `f64`); the aliases below fix `f64`.

pub mod error;
pub mod kernels;
pub mod linalg;
pub mod multiplier;
pub mod operators;
pub mod polyapprox;
pub mod quadrature;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Real;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Complex64 = num_complex::Complex<f64>;
pub type Interval64 = quadrature::Interval<f64>;
pub type QuadResult64 = quadrature::QuadResult<f64>;
