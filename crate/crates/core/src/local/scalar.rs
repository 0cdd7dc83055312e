//! The minimal ring interface shared by polynomials and matrices.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gf::Gf;
use super::series::Series;

/// A commutative ring whose constants may depend on a runtime context
/// (the field of a `Gf`, say), so constants are produced from an existing
/// element rather than from nothing.
pub trait Ring:
    Clone + PartialEq + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// Exact zero (a series that is only zero up to its precision is not).
    fn is_zero(&self) -> bool;
    fn from_i64_like(&self, n: i64) -> Self;
    /// Division by a small integer that is invertible in the ring.
    fn scale_inv_int(&self, n: i64) -> Self;
}

impl Ring for Gf {
    fn zero_like(&self) -> Self {
        self.ctx().zero()
    }
    fn one_like(&self) -> Self {
        self.ctx().one()
    }
    fn is_zero(&self) -> bool {
        Gf::is_zero(self)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        self.ctx().from_int(n)
    }
    fn scale_inv_int(&self, n: i64) -> Self {
        *self / self.ctx().from_int(n)
    }
}

impl Ring for Series {
    fn zero_like(&self) -> Self {
        Series::zero(self.ctx())
    }
    fn one_like(&self) -> Self {
        Series::one(self.ctx())
    }
    fn is_zero(&self) -> bool {
        self.is_exact_zero()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Series::constant(self.ctx().from_int(n))
    }
    fn scale_inv_int(&self, n: i64) -> Self {
        self.scale(self.ctx().from_int(n).inv().expect("integer not invertible"))
    }
}

impl Ring for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn scale_inv_int(&self, n: i64) -> Self {
        self / BigRational::from_integer(BigInt::from(n))
    }
}
