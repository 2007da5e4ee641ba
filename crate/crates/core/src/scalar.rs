//! Floating-point abstraction shared by the geometry, belief and scoring code.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::AddAssign;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use rand::distr::uniform::SampleUniform;
use rand::distr::weighted::Weight;
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar used for coordinates, probabilities and path weights.
///
/// Implemented for `f32` and `f64`. Tolerances quoted throughout the crate
/// (e.g. `1e-9` on probability sums) assume `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + for<'a> Sum<&'a Self>
    + AddAssign
    + for<'a> AddAssign<&'a Self>
    + SampleUniform
    + Weight
    + Serialize
    + DeserializeOwned
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Draw from the unit-rate exponential distribution.
    fn sample_exp1<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Lossy conversion from a literal; every `f64` is representable up to rounding.
    #[inline]
    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("f64 literal converts to scalar")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

macro_rules! impl_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            #[inline]
            fn sample_exp1<R: Rng + ?Sized>(rng: &mut R) -> Self {
                Exp1.sample(rng)
            }
        }
    )*};
}

impl_scalar!(f32, f64);
