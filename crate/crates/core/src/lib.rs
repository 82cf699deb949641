//! Portraits of automorphisms of the ternary rooted tree, the subgroups
//! `E_n` and `H_n`, fixed-point counting, and the arithmetic of
//! `f(z) = -2z^3 + 3z^2` over `Q` and over prime fields.
//!
//! Numeric code that does not need exactness is generic over [`Scalar`];
//! the aliases below pick the usual instantiations.

pub mod counting;
pub mod error;
pub mod experiments;
pub mod groups;
pub mod modp;
pub mod poly;
pub mod scalar;
pub mod stats;
pub mod tree;

pub use error::{Error, Result};
pub use scalar::Scalar;

use num_rational::BigRational;

/// Polynomial over `Q`.
pub type RatPoly = poly::Poly<BigRational>;
/// Fixed-point ratio state with exact rational entries.
pub type ExactRatioState = counting::RatioState<BigRational>;
/// Fixed-point ratio state in double precision.
pub type FloatRatioState = counting::RatioState<f64>;
/// Fixed-point ratio state in single precision.
pub type F32RatioState = counting::RatioState<f32>;
