//! Scalar traits for exact coefficient rings.
//!
//! Everything in this crate is computed over exact scalars; there is no
//! floating point anywhere. The default scalar is [`Rat`] (arbitrary
//! precision rationals). A fixed-width rational [`Rat128`] is provided for
//! hot sweep loops whose values are provably tiny; it is still exact.

use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arbitrary-precision rational, the default coefficient field.
pub type Rat = BigRational;

/// Fixed-width exact rational for small-value sweeps.
pub type Rat128 = Ratio<i128>;

/// An exact commutative ring scalar.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + FromPrimitive
    + Send
    + Sync
    + 'static
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer embeds into scalar")
    }
}

/// A scalar with exact division, used by the linear algebra kernel.
pub trait FieldScalar: Scalar + Div<Output = Self> + Signed {}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Eq
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + FromPrimitive
        + Send
        + Sync
        + 'static
{
}

impl FieldScalar for Rat {}
impl FieldScalar for Rat128 {}

/// Shorthand for embedding an integer.
pub fn int<R: Scalar>(n: i64) -> R {
    R::from_int(n)
}

/// Shorthand for an exact fraction a/b.
pub fn frac<R: FieldScalar>(a: i64, b: i64) -> R {
    int::<R>(a) / int::<R>(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_embedding() {
        assert_eq!(int::<Rat>(-3) + int::<Rat>(3), Rat::zero());
        assert_eq!(frac::<Rat>(1, 2) + frac::<Rat>(1, 2), Rat::one());
        assert_eq!(frac::<Rat128>(2, 4), frac::<Rat128>(1, 2));
    }
}
