//! Exact integers, rationals and integer lattice linear algebra.

mod matrix;
mod rat;
mod snf;

pub use matrix::{rat_inverse, IntMat, RatMat};
pub use rat::Rat;
pub use snf::{hermite_normal_form, smith_normal_form, HnfResult, SnfResult};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Greatest common divisor of a nonempty list. All zeros give 0.
pub fn gcd_list(xs: &[BigInt]) -> Result<BigInt> {
    if xs.is_empty() {
        return Err(Error::Empty("gcd_list"));
    }
    Ok(xs.iter().fold(BigInt::zero(), |g, x| g.gcd(x)))
}

/// Least common multiple of a nonempty list of positive integers.
pub fn lcm_list(xs: &[BigInt]) -> Result<BigInt> {
    if xs.is_empty() {
        return Err(Error::Empty("lcm_list"));
    }
    if xs.iter().any(|x| !x.is_positive()) {
        return Err(Error::NonPositive("lcm_list"));
    }
    Ok(xs.iter().fold(BigInt::from(1), |l, x| l.lcm(x)))
}

pub fn gcd_u64(xs: &[u64]) -> u64 {
    xs.iter().fold(0, |g, &x| g.gcd(&x))
}
