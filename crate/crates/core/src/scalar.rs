//! Scalar abstraction: f32 or f64.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FromPrimitive};
use rand::distributions::uniform::SampleUniform;

/// Floating-point scalar for weights, measurements, and statistics.
///
/// Bundles everything the engine needs from a float type: arithmetic
/// (`Float`), conversion from counts and literals (`FromPrimitive`),
/// uniform sampling (`SampleUniform`), and text round-tripping
/// (`Display` / `LowerExp`).
pub trait Scalar:
    Float + FromPrimitive + SampleUniform + Display + LowerExp + Debug + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + SampleUniform + Display + LowerExp + Debug + Send + Sync + 'static
{
}
