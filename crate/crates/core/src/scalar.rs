//! Scalar abstraction shared by the formula evaluators.
//!
//! Dimension formulas, water-filling and the Wang–Wu exponent are pure
//! field arithmetic plus comparisons, so they are written once over
//! [`Scalar`] and instantiated with [`crate::Rational`] for exact answers or
//! `f64` for quick exploration.

use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar:
    Clone + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync
{
    /// The value `numer / denom`.
    fn ratio(numer: i64, denom: i64) -> Self {
        let n = Self::from_i64(numer).expect("integer is representable");
        let d = Self::from_i64(denom).expect("integer is representable");
        n / d
    }

    fn from_usize_lossless(v: usize) -> Self {
        Self::from_usize(v).expect("integer is representable")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Clone
        + PartialOrd
        + Num
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Send
        + Sync
{
}

pub(crate) fn min_of<T: Scalar>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

pub(crate) fn sum_of<T: Scalar>(xs: &[T]) -> T {
    xs.iter().cloned().fold(T::zero(), |acc, x| acc + x)
}
