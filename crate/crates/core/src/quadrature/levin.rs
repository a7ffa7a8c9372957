use num_complex::Complex;

use super::gauss_kronrod::{adaptive_driver, qk15, AdaptiveOptions, Panel};
use super::{Interval, QuadResult};
use crate::error::{Error, Result};
use crate::linalg::solve_complex;
use crate::scalar::{cis, from_usize, lit, to_f64, Real};

/// Real phase φ with its first derivative.
pub trait Phase<T: Real> {
    fn value(&self, s: T) -> T;
    fn derivative(&self, s: T) -> T;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroPhase;

impl<T: Real> Phase<T> for ZeroPhase {
    fn value(&self, _s: T) -> T {
        T::zero()
    }
    fn derivative(&self, _s: T) -> T {
        T::zero()
    }
}

/// φ(s) = ω s.
#[derive(Debug, Clone, Copy)]
pub struct LinearPhase<T> {
    pub omega: T,
}

impl<T: Real> Phase<T> for LinearPhase<T> {
    fn value(&self, s: T) -> T {
        self.omega * s
    }
    fn derivative(&self, _s: T) -> T {
        self.omega
    }
}

/// φ(s) = λ s².
#[derive(Debug, Clone, Copy)]
pub struct QuadraticPhase<T> {
    pub lambda: T,
}

impl<T: Real> Phase<T> for QuadraticPhase<T> {
    fn value(&self, s: T) -> T {
        self.lambda * s * s
    }
    fn derivative(&self, s: T) -> T {
        lit::<T>(2.0) * self.lambda * s
    }
}

/// Phase given by a value closure and a derivative closure.
pub struct FnPhase<F, D> {
    value: F,
    derivative: D,
}

impl<F, D> FnPhase<F, D> {
    pub fn new(value: F, derivative: D) -> Self {
        Self { value, derivative }
    }
}

impl<T: Real, F: Fn(T) -> T, D: Fn(T) -> T> Phase<T> for FnPhase<F, D> {
    fn value(&self, s: T) -> T {
        (self.value)(s)
    }
    fn derivative(&self, s: T) -> T {
        (self.derivative)(s)
    }
}

impl<T: Real, P: Phase<T> + ?Sized> Phase<T> for &P {
    fn value(&self, s: T) -> T {
        (**self).value(s)
    }
    fn derivative(&self, s: T) -> T {
        (**self).derivative(s)
    }
}

const FAST_PATH_RADIANS: f64 = 50.0;
const LEVIN_MIN_RADIANS: f64 = 8.0;
const LEVIN_LOW: usize = 12;
const LEVIN_HIGH: usize = 20;
const PHASE_SAMPLES: usize = 9;

/// Levin collocation on Chebyshev–Lobatto nodes: solve p′ + iφ′p = f and return
/// p(hi)e^{iφ(hi)} − p(lo)e^{iφ(lo)}.
fn levin_panel<T, A, P>(amplitude: &A, phase: &P, lo: T, hi: T, n: usize) -> Result<Complex<T>>
where
    T: Real,
    A: Fn(T) -> Complex<T>,
    P: Phase<T>,
{
    let m = n - 1;
    let two = lit::<T>(2.0);
    let mid = (lo + hi) / two;
    let half = (hi - lo) / two;
    let cheb: Vec<T> = (0..n)
        .map(|k| (T::PI() * from_usize::<T>(k) / from_usize::<T>(m)).cos())
        .collect();
    let x: Vec<T> = cheb.iter().map(|&c| mid + half * c).collect();
    let weight = |k: usize| {
        let c = if k == 0 || k == m { two } else { T::one() };
        if k % 2 == 0 {
            c
        } else {
            -c
        }
    };
    let mut a = vec![Complex::new(T::zero(), T::zero()); n * n];
    for i in 0..n {
        let mut diag = T::zero();
        for j in 0..n {
            if i != j {
                let d = weight(i) / weight(j) / (cheb[i] - cheb[j]);
                a[i * n + j] = Complex::new(d / half, T::zero());
                diag -= d;
            }
        }
        a[i * n + i] = Complex::new(diag / half, phase.derivative(x[i]));
    }
    let mut rhs = Vec::with_capacity(n);
    for &xi in &x {
        let v = amplitude(xi);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite { at: to_f64(xi) });
        }
        rhs.push(v);
    }
    let p = solve_complex(a, rhs)?;
    Ok(p[0] * cis(phase.value(hi)) - p[m] * cis(phase.value(lo)))
}

fn oscillatory_panel<T, A, P>(amplitude: &A, phase: &P, lo: T, hi: T) -> Result<Panel<T>>
where
    T: Real,
    A: Fn(T) -> Complex<T>,
    P: Phase<T>,
{
    let width = hi - lo;
    let mut dmin = T::infinity();
    let mut dmax = T::zero();
    let mut sign_change = false;
    let mut first_sign = None;
    for k in 0..PHASE_SAMPLES {
        let s = lo + width * from_usize::<T>(k) / from_usize::<T>(PHASE_SAMPLES - 1);
        let d = phase.derivative(s);
        dmin = dmin.min(d.abs());
        dmax = dmax.max(d.abs());
        let sign = d > T::zero();
        match first_sign {
            None => first_sign = Some(sign),
            Some(s0) if s0 != sign || d == T::zero() => sign_change = true,
            _ => {}
        }
    }
    let variation = dmax * width;
    let integrand = |s: T| amplitude(s) * cis(phase.value(s));
    if variation <= lit(FAST_PATH_RADIANS) || sign_change || dmin * width < lit(LEVIN_MIN_RADIANS) {
        return qk15(&integrand, lo, hi);
    }
    let coarse = levin_panel(amplitude, phase, lo, hi, LEVIN_LOW);
    let fine = levin_panel(amplitude, phase, lo, hi, LEVIN_HIGH);
    match (coarse, fine) {
        (Ok(c), Ok(f)) => {
            let err = (f - c).norm() + lit::<T>(64.0) * T::epsilon() * f.norm();
            Ok(Panel { lo, hi, value: f, err, evaluations: LEVIN_LOW + LEVIN_HIGH })
        }
        (Err(Error::NonFinite { at }), _) | (_, Err(Error::NonFinite { at })) => Err(Error::NonFinite { at }),
        _ => {
            log::warn!(
                "Levin collocation singular on [{}, {}]; falling back to adaptive quadrature",
                to_f64(lo),
                to_f64(hi)
            );
            qk15(&integrand, lo, hi)
        }
    }
}

/// `∫_iv amplitude(s) e^{iφ(s)} ds`.
///
/// Panels whose phase varies by more than 50 rad with a one-signed φ′ are integrated by Levin
/// collocation (cost independent of the frequency); all other panels use G7/K15 and bisection.
pub fn integrate_oscillatory<T, A, P>(amplitude: A, phase: P, iv: Interval<T>, tol: T) -> Result<QuadResult<T>>
where
    T: Real,
    A: Fn(T) -> Complex<T>,
    P: Phase<T>,
{
    integrate_oscillatory_with(amplitude, phase, iv, tol, AdaptiveOptions::default())
}

pub fn integrate_oscillatory_with<T, A, P>(
    amplitude: A,
    phase: P,
    iv: Interval<T>,
    tol: T,
    opts: AdaptiveOptions,
) -> Result<QuadResult<T>>
where
    T: Real,
    A: Fn(T) -> Complex<T>,
    P: Phase<T>,
{
    let d_lo = phase.derivative(iv.lo());
    let d_hi = phase.derivative(iv.hi());
    if d_lo == T::zero() || d_hi == T::zero() {
        log::debug!("stationary point on the support boundary; using adaptive subdivision near it");
    }
    adaptive_driver(iv, tol, opts.max_subdivisions, |lo, hi| oscillatory_panel(&amplitude, &phase, lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levin_matches_closed_form_for_linear_phase() {
        let omega = 200.0f64;
        let v = levin_panel(&|_t: f64| Complex::new(1.0, 0.0), &LinearPhase { omega }, 0.0, 1.0, 20).unwrap();
        let exact = (cis(omega) - Complex::new(1.0, 0.0)) / Complex::new(0.0, omega);
        assert!((v - exact).norm() < 1e-13);
    }
}
