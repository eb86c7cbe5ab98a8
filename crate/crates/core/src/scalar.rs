use std::fmt::{Debug, Display, LowerExp};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::Serialize;

/// Floating point type the evaluators run on: `f32` or `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + FromStr
    + Default
    + Serialize
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Slack used when snapping times onto the sample grid.
    fn grid_eps() -> Self {
        let e = Self::epsilon() * Self::lit(16.0);
        let floor = Self::lit(1e-9);
        if e > floor {
            e
        } else {
            floor
        }
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
