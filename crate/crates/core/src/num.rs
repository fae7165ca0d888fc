//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossless-enough conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar representable as f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `x^k` for a small non-negative integer exponent.
#[inline]
pub(crate) fn powu<T: Real>(x: T, k: u32) -> T {
    x.powi(k as i32)
}

/// `log(2 cosh x)` without overflow for large `|x|`.
#[inline]
pub(crate) fn log_2cosh<T: Real>(x: T) -> T {
    let a = x.abs();
    a + (-(a + a)).exp().ln_1p()
}

/// Error function, evaluated in double precision.
#[inline]
pub(crate) fn erf<T: Real>(x: T) -> T {
    T::lit(libm::erf(x.as_f64()))
}
