use num_complex::Complex;

use super::{integrate_adaptive, Interval, QuadResult};
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// First-order pole location for [`integrate_pv`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvSpec<T> {
    pub singularity: T,
}

impl<T> PvSpec<T> {
    pub fn at(singularity: T) -> Self {
        Self { singularity }
    }
}

/// Principal value of `∫ g(t)/(t − c) dt` over `iv`, where `g` is the regular numerator.
///
/// The pole is moved to 0 and the largest symmetric window `[c − r, c + r]` is integrated as
/// `∫_0^r (g(c+u) − g(c−u))/u du`; the leftover one-sided piece is regular.
pub fn integrate_pv<T, G>(g: G, iv: Interval<T>, pv: PvSpec<T>, tol: T) -> Result<QuadResult<T>>
where
    T: Real,
    G: Fn(T) -> Complex<T>,
{
    let c = pv.singularity;
    if c == iv.lo() || c == iv.hi() {
        return Err(Error::PoleOnBoundary { at: to_f64(c) });
    }
    if !iv.contains_strictly(c) {
        return integrate_adaptive(|t| g(t) / (t - c), iv, tol);
    }
    let r = (c - iv.lo()).min(iv.hi() - c);
    let half = tol / lit(2.0);
    let core = integrate_adaptive(|u| (g(c + u) - g(c - u)) / u, Interval::new(T::zero(), r)?, half)?;
    let lo_rest = c - r;
    let hi_rest = c + r;
    if lo_rest > iv.lo() {
        let side = integrate_adaptive(|t| g(t) / (t - c), Interval::new(iv.lo(), lo_rest)?, half)?;
        Ok(core.combine(side))
    } else if hi_rest < iv.hi() {
        let side = integrate_adaptive(|t| g(t) / (t - c), Interval::new(hi_rest, iv.hi())?, half)?;
        Ok(core.combine(side))
    } else {
        Ok(core)
    }
}
