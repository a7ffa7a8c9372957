use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_adaptive, Interval, QuadResult};
use crate::scalar::{cis, creal, lit, to_f64, Real};

fn check_args<T: Real>(a: T, s: T) -> Result<()> {
    if !(a > T::zero()) {
        return Err(Error::InvalidInput(format!("kernel needs a > 0, got {}", to_f64(a))));
    }
    if !(s > T::zero()) {
        return Err(Error::InvalidInput(format!("kernel needs s > 0, got {}", to_f64(s))));
    }
    Ok(())
}

/// K₁ = (e^{ib√s} − e^{−ib√s}) / (2√s (√s + a)).
pub fn kernel_k1<T: Real>(a: T, b: T, s: T) -> Result<Complex<T>> {
    check_args(a, s)?;
    let r = s.sqrt();
    let num = cis(b * r) - cis(-b * r);
    Ok(num / creal(lit::<T>(2.0) * r * (r + a)))
}

/// K₂ = a e^{ib√s} / (√s (s − a²)).
pub fn kernel_k2<T: Real>(a: T, b: T, s: T) -> Result<Complex<T>> {
    check_args(a, s)?;
    let d = s - a * a;
    if d == T::zero() {
        return Err(Error::SingularPoint { at: to_f64(s) });
    }
    let r = s.sqrt();
    Ok(cis(b * r) * (a / (r * d)))
}

/// ½ [e^{ib√s}/(√s(√s − a)) − e^{−ib√s}/(√s(√s + a))], which equals K₁ + K₂.
pub fn kernel_split_rhs<T: Real>(a: T, b: T, s: T) -> Result<Complex<T>> {
    check_args(a, s)?;
    let r = s.sqrt();
    if r == a {
        return Err(Error::SingularPoint { at: to_f64(s) });
    }
    let half = lit::<T>(0.5);
    Ok((cis(b * r) / creal(r * (r - a)) - cis(-b * r) / creal(r * (r + a))) * half)
}

/// The three comparison integrals that bound the K₁/K₂ pieces.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComparisonIntegrals<T> {
    /// ∫_{a²/2}^{3a²/2} dt / (2√t (√t + a))
    pub middle: QuadResult<T>,
    /// ∫_{3a²/2}^∞ a / (√t (t − a²)) dt
    pub tail: QuadResult<T>,
    /// ∫_{a²}^∞ a / (t (√t + a)) dt
    pub far_tail: QuadResult<T>,
}

/// ∫_{t0}^∞ F(t) dt through t = t0/u², u ∈ (0, 1]; bounded when F = O(t^{−3/2}).
fn semi_infinite<T: Real, F: Fn(T) -> T>(f: F, t0: T, tol: T) -> Result<QuadResult<T>> {
    let two = lit::<T>(2.0);
    integrate_adaptive(
        |u: T| {
            let t = t0 / (u * u);
            creal(f(t) * two * t0 / (u * u * u))
        },
        Interval::new(T::zero(), T::one())?,
        tol,
    )
}

pub fn comparison_integrals<T: Real>(a: T, tol: T) -> Result<ComparisonIntegrals<T>> {
    if !(a > T::zero()) {
        return Err(Error::InvalidInput(format!("comparison integrals need a > 0, got {}", to_f64(a))));
    }
    let a2 = a * a;
    let two = lit::<T>(2.0);
    let middle = integrate_adaptive(
        |t: T| creal(T::one() / (two * t.sqrt() * (t.sqrt() + a))),
        Interval::new(a2 / two, lit::<T>(1.5) * a2)?,
        tol,
    )?;
    let tail = semi_infinite(|t: T| a / (t.sqrt() * (t - a2)), lit::<T>(1.5) * a2, tol)?;
    let far_tail = semi_infinite(|t: T| a / (t * (t.sqrt() + a)), a2, tol)?;
    Ok(ComparisonIntegrals { middle, tail, far_tail })
}
