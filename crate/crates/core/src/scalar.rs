//! Scalar traits shared by the generic engines.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{Float, FromPrimitive, Signed, ToPrimitive};

/// Exact integer type usable as a normal coordinate (`i64`, `i128`, `BigInt`).
pub trait Coordinate: Clone + Ord + Integer + Signed + FromPrimitive + ToPrimitive + Debug + Display {}

impl<T> Coordinate for T where T: Clone + Ord + Integer + Signed + FromPrimitive + ToPrimitive + Debug + Display {}

/// Floating point type for the numerical flow code (`f32`, `f64`).
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}
