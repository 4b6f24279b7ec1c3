//! Scalar abstraction for the algebraic layer.
//!
//! The sl(2) generators and the gauged Hamiltonian only need ring operations
//! plus division by small integers, so they are written once over [`Scalar`]
//! and instantiated with `f64`, `Complex<f64>` in production and with exact
//! rationals (`Ratio<i64>`, `Complex<Ratio<i64>>`) in the consistency suites.

use std::fmt::Debug;
use std::ops::Neg;

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::Num;

pub trait Scalar: Num + Clone + PartialEq + Debug + Neg<Output = Self> {
    fn from_i64(value: i64) -> Self;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_i64(numer) / Self::from_i64(denom)
    }
}

impl Scalar for f32 {
    fn from_i64(value: i64) -> Self {
        value as f32
    }
}

impl Scalar for f64 {
    fn from_i64(value: i64) -> Self {
        value as f64
    }
}

impl Scalar for Ratio<i64> {
    fn from_i64(value: i64) -> Self {
        Ratio::from_integer(value)
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(numer, denom)
    }
}

impl<T: Scalar> Scalar for Complex<T> {
    fn from_i64(value: i64) -> Self {
        Complex::new(T::from_i64(value), T::zero())
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Complex::new(T::from_ratio(numer, denom), T::zero())
    }
}
