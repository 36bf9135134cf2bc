//! The small field abstraction used by the splitting code.

use std::fmt;

use num_traits::{One, Zero};

use crate::exactalg::Q;

/// Exact field arithmetic needed by the matrix algorithms.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Panics on zero.
    fn inv(&self) -> Self;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_q(c: Q) -> Self;
}

impl Field for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn from_q(c: Q) -> Self {
        c
    }
}
