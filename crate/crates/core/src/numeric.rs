//! Numeric abstraction shared by the Möbius transforms and the LP solver.
//!
//! Everything that has to run both in fast `f64` mode and in exact
//! big-rational mode is written against [`Scalar`]. Conversions from `f64`
//! are exact (every finite double is a dyadic rational), so switching a
//! computation to rational mode never perturbs its inputs.

use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::Neg;

pub trait Scalar: Num + Neg<Output = Self> + Clone + PartialOrd + Debug {
    /// Exact conversion from a finite `f64`.
    fn from_f64(v: f64) -> Self;

    /// Nearest-double view of the value.
    fn to_f64(&self) -> f64;

    /// Comparison slack used by iterative algorithms: zero in exact mode.
    fn tolerance() -> Self;

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn tolerance() -> Self {
        1e-9
    }
}

impl Scalar for BigRational {
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite value required for exact conversion")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn tolerance() -> Self {
        Self::zero()
    }
}
