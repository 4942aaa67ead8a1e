//! The scalar abstraction shared by matrices and polynomials.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A field element, possibly known only to finite precision.
///
/// All values built from one context share that context; mixing contexts
/// inside a matrix is rejected when the matrix is built, so the arithmetic
/// methods here may assume compatible operands.
pub trait Scalar: Clone + Debug + PartialEq {
    type Ctx: Clone + Debug + PartialEq;

    fn context(&self) -> Self::Ctx;
    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn one_in(ctx: &Self::Ctx) -> Self;
    fn from_i64_in(ctx: &Self::Ctx, value: i64) -> Self;

    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Result<Self>;

    /// True when no known digit of the value is nonzero.
    fn vanishes(&self) -> bool;

    /// True when the value is zero with certainty (not merely to the
    /// available precision).
    fn vanishes_exactly(&self) -> bool {
        self.vanishes()
    }

    /// True when the value carries no precision bound at all.
    fn is_exact(&self) -> bool {
        true
    }

    /// Preference when choosing elimination pivots: smaller is better,
    /// `None` for values that cannot serve as a pivot.
    fn pivot_weight(&self) -> Option<i64> {
        if self.vanishes() {
            None
        } else {
            Some(0)
        }
    }

    fn divided(&self, other: &Self) -> Result<Self> {
        Ok(self.times(&other.inverse()?))
    }

    fn pow_u64(&self, mut exp: u64) -> Self {
        let mut acc = Self::one_in(&self.context());
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.times(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.times(&base);
            }
        }
        acc
    }
}

/// Outcome of asking whether a possibly inexact value vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroTest {
    Zero,
    NonZero,
    Unknown,
}

pub fn zero_test<T: Scalar>(x: &T) -> ZeroTest {
    if !x.vanishes() {
        ZeroTest::NonZero
    } else if x.vanishes_exactly() {
        ZeroTest::Zero
    } else {
        ZeroTest::Unknown
    }
}

impl Scalar for BigRational {
    type Ctx = ();

    fn context(&self) {}

    fn zero_in(_: &()) -> Self {
        BigRational::zero()
    }

    fn one_in(_: &()) -> Self {
        BigRational::one()
    }

    fn from_i64_in(_: &(), value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn minus(&self, other: &Self) -> Self {
        self - other
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn negated(&self) -> Self {
        -self
    }

    fn inverse(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"a"`, `"-a"` or `"a/b"`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if Zero::is_zero(&d) {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_format() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), rat_int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert_eq!(format_rational(&rat(-1, 3)), "-1/3");
    }

    #[test]
    fn pow_by_squaring() {
        assert_eq!(rat(2, 3).pow_u64(5), rat(32, 243));
        assert_eq!(rat(2, 3).pow_u64(0), rat_int(1));
    }
}
