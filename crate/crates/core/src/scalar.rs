//! Scalar abstraction shared by every numeric type in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real field the algebra is built over. Implemented for `f32` and `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Library-wide default comparison tolerance for unit-scale operands.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Below this imaginary-part magnitude a point is treated as real.
pub const AXIS_TOLERANCE: f64 = 1e-12;

/// Minimum orthogonal residual accepted while completing a frame.
pub const FRAME_SCAN_THRESHOLD: f64 = 1e-6;

/// CF-system tolerance when exact stem derivatives are available.
pub const CF_TOLERANCE_ANALYTIC: f64 = 1e-10;

/// CF-system tolerance under the finite-difference fallback.
pub const CF_TOLERANCE_FD: f64 = 1e-8;

/// Relative step for the fourth-order central differences.
pub const FD_STEP: f64 = 1e-4;
