//! Scalar abstraction shared by every scoring routine.
//!
//! Scoring code is written once against [`Real`] and instantiated for `f64`
//! (the default used by the engine and CLI) or `f32`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumCast};

/// floating point scalar usable by the ranking functions: f32 or f64
pub trait Real:
    Float + FromPrimitive + NumCast + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts a configuration literal. Panics only if the value is not
    /// representable at all, which cannot happen for finite `f64` inputs.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("finite literal")
    }

    /// Converts an integral count.
    fn count(value: u64) -> Self {
        Self::from_u64(value).expect("count fits scalar")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
