//! Exact scalar fields used for coefficients.
//!
//! Everything in this crate is generic over [`Scalar`], an exact ordered
//! field. The implementations are `Ratio<I>` for any signed machine or
//! big integer `I`; floating point types are deliberately not supported
//! because every verdict here depends on literal equality.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, One, Signed};

pub trait Scalar:
    Clone + Debug + Display + FromStr + Ord + Hash + Signed + Send + Sync + 'static
{
    type Int: Integer + Signed + Clone + Debug + Display;

    fn from_i64(v: i64) -> Self;

    fn ratio(numer: i64, denom: i64) -> Self;

    fn numer_int(&self) -> Self::Int;

    fn denom_int(&self) -> Self::Int;

    fn from_int(v: Self::Int) -> Self;

    fn is_integral(&self) -> bool {
        self.denom_int().is_one()
    }
}

impl<I> Scalar for Ratio<I>
where
    I: Integer + Signed + Clone + Debug + Display + FromStr + Hash + FromPrimitive + Send + Sync + 'static,
{
    type Int = I;

    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(I::from_i64(v).expect("integer out of range for scalar type"))
    }

    fn ratio(numer: i64, denom: i64) -> Self {
        let n = I::from_i64(numer).expect("integer out of range for scalar type");
        let d = I::from_i64(denom).expect("integer out of range for scalar type");
        Ratio::new(n, d)
    }

    fn numer_int(&self) -> I {
        self.numer().clone()
    }

    fn denom_int(&self) -> I {
        self.denom().clone()
    }

    fn from_int(v: I) -> Self {
        Ratio::from_integer(v)
    }
}

/// Shorthand for `T::ratio(n, d)`.
pub fn q<T: Scalar>(numer: i64, denom: i64) -> T {
    T::ratio(numer, denom)
}

/// Shorthand for `T::from_i64(v)`.
pub fn z<T: Scalar>(v: i64) -> T {
    T::from_i64(v)
}
