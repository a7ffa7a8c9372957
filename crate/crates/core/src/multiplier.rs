//! The parabola multiplier m₂(ξ, η) = p.v. ∫ e^{i(ξt + ηt²)} dt/t and its restrictions to lines.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_oscillatory, integrate_pv, FnPhase, Interval, PvSpec};
use crate::scalar::{cis, czero, lit, to_f64, Real};

/// Slope parameter of a line in the (ξ, η) plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slope<T> {
    Finite(T),
    Infinite,
}

/// The line (aη + b, η) for finite a, or (η, b) for a = +∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSpec<T> {
    pub slope: Slope<T>,
    pub offset: T,
}

impl<T: Real> LineSpec<T> {
    /// (ξ, η) coordinates of the point with parameter `eta`.
    pub fn point(&self, eta: T) -> (T, T) {
        match self.slope {
            Slope::Finite(a) => (a * eta + self.offset, eta),
            Slope::Infinite => (eta, self.offset),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MultiplierValue<T> {
    pub value: Complex<T>,
    pub error: T,
}

const CORE_RADIUS: f64 = 1.0;

/// ∫_1^∞ e^{i(ξt + ηt²)} dt/t for η ≠ 0: oscillatory quadrature on [1, T₂] plus an
/// integration-by-parts bound 2/(T₂|ξ + 2ηT₂|) for the remainder.
fn right_tail<T: Real>(xi: T, eta: T, tol: T) -> Result<(Complex<T>, T)> {
    let two = lit::<T>(2.0);
    let one = T::one();
    let dphi = |t: T| xi + two * eta * t;
    let target = xi.abs().max(lit(10.0)) / two;
    let design = one.max((xi.abs() + target) / (two * eta.abs()));
    let bound = |t: T| two / (t * dphi(t).abs());
    let budget = tol / lit(8.0);
    let mut t2 = design.max(lit(CORE_RADIUS * 2.0));
    let mut guard = 0;
    while bound(t2) > budget {
        t2 = t2 * two;
        guard += 1;
        if guard > 200 || !t2.is_finite() {
            return Err(Error::TailNotConverged(format!(
                "no truncation radius for xi = {}, eta = {}",
                to_f64(xi),
                to_f64(eta)
            )));
        }
    }
    let phase = FnPhase::new(|t: T| xi * t + eta * t * t, dphi);
    let r = integrate_oscillatory(
        |t: T| Complex::new(one / t, T::zero()),
        phase,
        Interval::new(lit(CORE_RADIUS), t2)?,
        tol / lit(4.0),
    )?;
    Ok((r.value, r.abs_error_estimate + bound(t2)))
}

/// m₂(ξ, η) = p.v. ∫_ℝ e^{i(ξt + ηt²)} dt/t (bare integral, no 2π rescaling).
pub fn eval_m2<T: Real>(xi: T, eta: T, tol: T) -> Result<MultiplierValue<T>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    if !(xi.is_finite() && eta.is_finite()) {
        return Err(Error::InvalidInput("multiplier arguments must be finite".into()));
    }
    if xi == T::zero() {
        return Ok(MultiplierValue { value: czero(), error: T::zero() });
    }
    if eta == T::zero() {
        let v = Complex::new(T::zero(), T::PI() * xi.signum());
        return Ok(MultiplierValue { value: v, error: T::zero() });
    }
    let r = lit::<T>(CORE_RADIUS);
    let core = integrate_pv(
        |t: T| cis(xi * t + eta * t * t),
        Interval::new(-r, r)?,
        PvSpec::at(T::zero()),
        tol / lit(4.0),
    )?;
    let (right, e_right) = right_tail(xi, eta, tol)?;
    let (left, e_left) = right_tail(-xi, eta, tol)?;
    Ok(MultiplierValue {
        value: core.value + right - left,
        error: core.abs_error_estimate + e_right + e_left,
    })
}

/// m_{a,b}(η) = m₂(aη + b, η); for a = +∞, m₂(η, b).
pub fn eval_line<T: Real>(line: LineSpec<T>, eta: T, tol: T) -> Result<MultiplierValue<T>> {
    let (x, y) = line.point(eta);
    eval_m2(x, y, tol)
}

/// |m₂(λξ, λ²η) − m₂(ξ, η)|.
pub fn check_anisotropic_homogeneity<T: Real>(xi: T, eta: T, lambda: T, tol: T) -> Result<T> {
    if !(lambda > T::zero()) {
        return Err(Error::InvalidInput(format!("lambda must be positive, got {}", to_f64(lambda))));
    }
    let a = eval_m2(lambda * xi, lambda * lambda * eta, tol)?;
    let b = eval_m2(xi, eta, tol)?;
    Ok((a.value - b.value).norm())
}

/// |conj(m₂(ξ, η)) − m₂(−ξ, −η)|.
pub fn check_conjugation_symmetry<T: Real>(xi: T, eta: T, tol: T) -> Result<T> {
    let a = eval_m2(xi, eta, tol)?;
    let b = eval_m2(-xi, -eta, tol)?;
    Ok((a.value.conj() - b.value).norm())
}
