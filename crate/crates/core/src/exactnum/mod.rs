//! Exact coefficient fields: the rationals and cyclotomic fields `Q(ζ_m)`.
//!
//! Everything that is compared coefficient-by-coefficient lives here. Values
//! are immutable and operations never round.

mod cyclo;
mod poly;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{QlabError, Result};

pub use cyclo::{cyclotomic_polynomial, euler_phi, Cyclo, CycloField};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Coefficient field of a truncated power series.
///
/// A field element may need a runtime context (the order `m` of a cyclotomic
/// field); constructors take that context explicitly because `Zero::zero()`
/// has nowhere to get it from.
pub trait FieldElem:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    type Ctx: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn context(&self) -> Self::Ctx;
    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn from_rat_in(r: &Rat, ctx: &Self::Ctx) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn try_inv(&self) -> Result<Self>;

    fn one_in(ctx: &Self::Ctx) -> Self {
        Self::from_int_in(1, ctx)
    }

    fn from_int_in(n: i64, ctx: &Self::Ctx) -> Self {
        Self::from_rat_in(&rat_int(n), ctx)
    }

    /// `self * n` for a machine integer, without building a field element first.
    fn scale_int(&self, n: i64) -> Self {
        self.clone() * &Self::from_int_in(n, &self.context())
    }

    /// Context-compatibility check used by series operations.
    fn same_context(&self, other: &Self) -> bool {
        self.context() == other.context()
    }
}

impl FieldElem for Rat {
    type Ctx = ();

    fn context(&self) -> Self::Ctx {}

    fn zero_in(_: &()) -> Self {
        Rat::zero()
    }

    fn from_rat_in(r: &Rat, _: &()) -> Self {
        r.clone()
    }

    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }

    fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            Err(QlabError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    fn one_in(_: &()) -> Self {
        Rat::one()
    }

    fn scale_int(&self, n: i64) -> Self {
        self * BigInt::from(n)
    }
}
