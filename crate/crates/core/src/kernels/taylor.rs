use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, to_f64, Real};

/// Coefficient source for the degree-5 polynomial P_b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TaylorSource {
    /// b (1 + t/2 − t²/4 + 3t³/8 − 15t⁴/16 + 105t⁵/32), as printed.
    PaperCoeffs,
    /// b (1 + t/2 − t²/8 + t³/16 − 5t⁴/128 + 7t⁵/256), the Taylor expansion of b√(1+t).
    TrueTaylor,
}

impl TaylorSource {
    fn unit_coeffs(self) -> [f64; 6] {
        match self {
            TaylorSource::PaperCoeffs => [1.0, 0.5, -0.25, 0.375, -0.9375, 3.28125],
            TaylorSource::TrueTaylor => [1.0, 0.5, -0.125, 0.0625, -0.0390625, 0.02734375],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorPoly<T> {
    pub b: T,
    pub coeffs: [T; 6],
    pub source: TaylorSource,
}

impl<T: Real> TaylorPoly<T> {
    pub fn eval(&self, t: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * t + *c)
    }

    /// b√(1+t) − P_b(t), evaluated as (b²(1+t) − P²)/(b√(1+t) + P) with the numerator
    /// expanded exactly, so the t⁶ behaviour near 0 survives rounding.
    pub fn remainder(&self, t: T) -> T {
        let u = self.source.unit_coeffs();
        let mut sq = [0.0f64; 11];
        for (i, a) in u.iter().enumerate() {
            for (j, b) in u.iter().enumerate() {
                sq[i + j] += a * b;
            }
        }
        let mut d = [0.0f64; 11];
        d[0] = 1.0 - sq[0];
        d[1] = 1.0 - sq[1];
        for m in 2..11 {
            d[m] = -sq[m];
        }
        let poly = d.iter().rev().fold(T::zero(), |acc, c| acc * t + lit::<T>(*c));
        let num = self.b * self.b * poly;
        num / (self.b * (T::one() + t).sqrt() + self.eval(t))
    }
}

pub fn taylor_p5<T: Real>(b: T, source: TaylorSource) -> Result<TaylorPoly<T>> {
    if !(b > T::zero()) {
        return Err(Error::InvalidInput(format!("P_b needs b > 0, got {}", to_f64(b))));
    }
    let u = source.unit_coeffs();
    let mut coeffs = [T::zero(); 6];
    for (c, v) in coeffs.iter_mut().zip(u) {
        *c = b * lit::<T>(v);
    }
    Ok(TaylorPoly { b, coeffs, source })
}

/// sup over a 10⁵-point grid on [−1/2, 1/2], |t| ≥ 10⁻⁴, of |b√(1+t) − P_b(t)| / (b t⁶).
pub fn remainder_ratio<T: Real>(b: T, source: TaylorSource) -> Result<T> {
    let p = taylor_p5(b, source)?;
    let n = 100_000usize;
    let cutoff = lit::<T>(1e-4);
    let mut worst = T::zero();
    for i in 0..=n {
        let t = lit::<T>(-0.5) + from_usize::<T>(i) / from_usize::<T>(n);
        if t.abs() < cutoff {
            continue;
        }
        let ratio = p.remainder(t).abs() / (b * t.powi(6));
        worst = worst.max(ratio);
    }
    Ok(worst)
}
