//! Scalar abstraction shared by every numerical module.
//!
//! All of the physics is written once against [`Real`]; `f64` is the working
//! precision for the CLI and the acceptance suite, `f32` is supported for
//! lighter-weight use where a few digits suffice.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Floating point scalar usable throughout the crate: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Debug + Display + Default + Sum
{
    /// Converts an `f64` literal into this scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal is representable")
    }

    /// Converts a sample count or index into this scalar type.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count is representable")
    }

    /// Lossy conversion to `f64`, used for reporting and serialization.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `true` when both parts of a complex value are finite.
pub fn is_finite_complex<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Relative distance `|a - b| / |b|`, falling back to the absolute distance
/// when `b` is exactly zero.
pub fn relative_error<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    let scale = b.norm();
    let diff = (a - b).norm();
    if scale > T::zero() {
        diff / scale
    } else {
        diff
    }
}
