//! Numerical verification toolkit for the delta-method treatment of GL(3) L-functions in
//! the t-aspect: Kloosterman sums, the Kloosterman circle method, stationary phase with
//! error envelopes, GL(3) gamma factors and Voronoi summation, and the S(N) pipeline.
//!
//! The integration and special-function kernels are generic over [`scalar::Real`]
//! (`f32` or `f64`); the number-theoretic layers work in `f64` through the aliases below.

pub mod arith;
pub mod circle;
pub mod error;
pub mod jet;
pub mod oscillatory;
pub mod scalar;
pub mod gl3;
pub mod special;
pub mod pipeline;
pub mod sweep;

pub use error::{Error, Result};

/// Working precision of the number-theoretic layers.
pub type Float = f64;
/// Complex numbers at working precision.
pub type Cplx = num_complex::Complex<f64>;
