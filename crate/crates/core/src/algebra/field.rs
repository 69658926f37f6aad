use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Coefficient field operations used by the polynomial and Gröbner code.
///
/// Method names carry an `f` prefix so they never collide with the operator
/// traits implemented on the concrete types.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn fadd(&self, o: &Self) -> Self;
    fn fsub(&self, o: &Self) -> Self;
    fn fmul(&self, o: &Self) -> Self;
    fn fneg(&self) -> Self;
    /// Panics on zero.
    fn finv(&self) -> Self;
    fn fdiv(&self, o: &Self) -> Self {
        self.fmul(&o.finv())
    }
    fn from_rational(q: Rational) -> Self;
    /// True for elements of the prime field.
    fn is_rational(&self) -> bool;
    /// Whether printing needs parentheses when used as a product factor.
    fn needs_parens(&self) -> bool;
    /// True when the printed form begins with a minus sign.
    fn is_negative_printed(&self) -> bool;
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn finv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn is_rational(&self) -> bool {
        true
    }
    fn needs_parens(&self) -> bool {
        false
    }
    fn is_negative_printed(&self) -> bool {
        self.is_negative()
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat2(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
