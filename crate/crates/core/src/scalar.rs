//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// Floating point scalar the simulators are generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn lit(x: f64) -> Self;

    fn as_f64(self) -> f64;
}

impl Real for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

/// Reduces an angle into the half-open interval (-pi, pi].
pub fn wrap_angle<T: Real>(angle: T) -> T {
    let two_pi = T::TAU();
    let mut a = angle % two_pi;
    if a > T::PI() {
        a -= two_pi;
    } else if a <= -T::PI() {
        a += two_pi;
    }
    a
}

/// `|a - b|` scaled by the larger magnitude, with `floor` guarding values near zero.
pub fn relative_deviation<T: Real>(a: T, b: T, floor: T) -> T {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}
