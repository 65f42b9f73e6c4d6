//! Exact integer scalars.
//!
//! Everything that evaluates a closed form or a pruning bound is generic over
//! [`ExactInt`]: fixed-width signed integers (with overflow reported, never
//! wrapped) or [`num_bigint::BigInt`].

use std::fmt;

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed};
use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("arithmetic overflow in the chosen scalar type")]
pub struct Overflow;

pub trait ExactInt:
    Clone
    + Integer
    + Signed
    + FromPrimitive
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
{
}

impl<T> ExactInt for T where
    T: Clone
        + Integer
        + Signed
        + FromPrimitive
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
{
}

pub fn int<T: ExactInt>(v: i64) -> Result<T, Overflow> {
    T::from_i64(v).ok_or(Overflow)
}

pub fn add<T: ExactInt>(a: &T, b: &T) -> Result<T, Overflow> {
    a.checked_add(b).ok_or(Overflow)
}

pub fn sub<T: ExactInt>(a: &T, b: &T) -> Result<T, Overflow> {
    a.checked_sub(b).ok_or(Overflow)
}

pub fn mul<T: ExactInt>(a: &T, b: &T) -> Result<T, Overflow> {
    a.checked_mul(b).ok_or(Overflow)
}

pub fn pow2<T: ExactInt>(exp: u32) -> Result<T, Overflow> {
    num_traits::checked_pow(int::<T>(2)?, exp as usize).ok_or(Overflow)
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;

    #[test]
    fn fixed_width_overflow_is_reported() {
        assert_eq!(pow2::<i64>(62).unwrap(), 1i64 << 62);
        assert_eq!(pow2::<i64>(63), Err(Overflow));
        assert_eq!(mul(&i64::MAX, &2), Err(Overflow));
        assert_eq!(
            pow2::<BigInt>(100).unwrap().to_string(),
            "1267650600228229401496703205376"
        );
    }
}
