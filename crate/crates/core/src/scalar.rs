use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar the models are written against: `f32` or `f64`.
pub trait Scalar: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Converts an `f64` literal. Every supported scalar can represent it (possibly rounded).
    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("scalar conversion from f64")
    }

    /// Converts a count.
    fn from_count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("scalar conversion from usize")
    }

    /// Threshold below which an overlap or denominator is treated as exactly zero.
    fn zero_threshold() -> Self {
        Self::lit(1e-12)
    }
}

impl Scalar for f32 {
    fn zero_threshold() -> Self {
        1e-6
    }
}

impl Scalar for f64 {}
