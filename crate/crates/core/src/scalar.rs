//! Scalar abstraction for the geometric layer.
//!
//! Disk geometry, wave packets and gauge potentials are written against
//! [`Real`], so they run in `f32` for quick previews and in `f64` for every
//! tolerance-bearing computation. Representation theory and the Bloch
//! transforms are pinned to `f64` since their contracts are stated at
//! double-precision tolerances.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst};

pub trait Real:
    Float + FloatConst + Debug + Display + Default + Send + Sync + std::iter::Sum + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("literal fits the scalar type")
    }

    fn to_f64(self) -> f64 {
        <f64 as num_traits::NumCast>::from(self).expect("scalar converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}
