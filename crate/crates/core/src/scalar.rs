//! Scalar abstraction shared by the closed-form and continuum code paths.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Sum + Send + Sync + 'static
{
    /// Exponent below which `exp` only produces subnormals or zero.
    const EXP_UNDERFLOW: f64;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// A tolerance no tighter than what the type can resolve: `max(base, 100 ε)`.
    #[inline]
    fn tolerance(base: f64) -> Self {
        Self::lit(base).max(Self::lit(100.0) * Self::epsilon())
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite conversion to f64")
    }
}

impl Real for f64 {
    const EXP_UNDERFLOW: f64 = -745.0;
}

impl Real for f32 {
    const EXP_UNDERFLOW: f64 = -103.0;
}

/// Pairwise (cascade) summation; the reduction order depends only on the
/// length of the input, so repeated runs give identical results.
pub fn pairwise_sum<T: Real>(values: &[T]) -> T {
    match values.len() {
        0 => T::zero(),
        1 => values[0],
        n if n <= 8 => values.iter().fold(T::zero(), |acc, &v| acc + v),
        n => {
            let (lo, hi) = values.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

/// `coth(x)` for `x > 0`, using the Laurent series `1/x + x/3` below `x < 5e-5`.
#[inline]
pub fn coth<T: Real>(x: T) -> T {
    if x < T::lit(5e-5) {
        x.recip() + x / T::lit(3.0)
    } else {
        x.tanh().recip()
    }
}
