//! One-dimensional quadrature: adaptive Gauss–Kronrod, principal values and oscillatory integrals.

mod gauss_kronrod;
mod levin;
mod pv;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{to_f64, Real};

pub use gauss_kronrod::{gauss_legendre, integrate_adaptive, integrate_adaptive_with, AdaptiveOptions};
pub use levin::{integrate_oscillatory, integrate_oscillatory_with, FnPhase, LinearPhase, Phase, QuadraticPhase, ZeroPhase};
pub use pv::{integrate_pv, PvSpec};

/// Finite integration interval with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Real> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "interval endpoints must be finite, got [{}, {}]",
                to_f64(lo),
                to_f64(hi)
            )));
        }
        if lo >= hi {
            return Err(Error::InvalidInput(format!(
                "interval needs lo < hi, got [{}, {}]",
                to_f64(lo),
                to_f64(hi)
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> T {
        (self.lo + self.hi) / (T::one() + T::one())
    }

    pub fn contains_strictly(&self, x: T) -> bool {
        self.lo < x && x < self.hi
    }
}

/// Value of an integral with its error estimate and cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult<T> {
    pub value: Complex<T>,
    pub abs_error_estimate: T,
    pub evaluations: usize,
}

impl<T: Real> QuadResult<T> {
    pub(crate) fn combine(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            abs_error_estimate: self.abs_error_estimate + other.abs_error_estimate,
            evaluations: self.evaluations + other.evaluations,
        }
    }
}
