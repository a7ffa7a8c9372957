use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cis, czero, from_usize, lit, to_f64, Real};

/// Complex samples f_m = f(lo + m h), m = 0..n, with h = (hi − lo)/n.
///
/// Between nodes the function is the 4-point cubic Lagrange interpolant; it is zero outside
/// the padded node range.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction<T> {
    lo: T,
    hi: T,
    values: Vec<Complex<T>>,
}

impl<T: Real> SampledFunction<T> {
    pub fn new(lo: T, hi: T, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() < 16 {
            return Err(Error::InvalidInput(format!("need at least 16 samples, got {}", values.len())));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidInput(format!("bad grid [{}, {})", to_f64(lo), to_f64(hi))));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidInput("samples must be finite".into()));
        }
        Ok(Self { lo, hi, values })
    }

    pub fn from_fn<F: Fn(T) -> Complex<T>>(lo: T, hi: T, n: usize, f: F) -> Result<Self> {
        let h = (hi - lo) / from_usize::<T>(n);
        let values = (0..n).map(|m| f(lo + from_usize::<T>(m) * h)).collect();
        Self::new(lo, hi, values)
    }

    /// All-zero function on the same grid; used as a template.
    pub fn zeros(lo: T, hi: T, n: usize) -> Result<Self> {
        Self::new(lo, hi, vec![czero(); n])
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> T {
        (self.hi - self.lo) / from_usize::<T>(self.values.len())
    }

    pub fn node(&self, m: usize) -> T {
        self.lo + from_usize::<T>(m) * self.spacing()
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..self.len()).map(|m| self.node(m)).collect()
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn with_values(&self, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != self.len() {
            return Err(Error::InvalidInput("value count does not match grid".into()));
        }
        Self::new(self.lo, self.hi, values)
    }

    pub(crate) fn geometry(&self) -> GridGeom<T> {
        GridGeom { lo: self.lo, h: self.spacing(), n: self.len() }
    }

    /// Cubic interpolant at `y`.
    pub fn interpolate(&self, y: T) -> Complex<T> {
        let g = self.geometry();
        let (c, nu) = g.locate(y);
        let w = lagrange4(nu);
        let mut acc = czero();
        for (k, wk) in w.iter().enumerate() {
            let m = c - 1 + k as i64;
            if m >= 0 && (m as usize) < self.len() {
                acc += self.values[m as usize] * *wk;
            }
        }
        acc
    }

    /// Samples of e^{iN₀x} f(x) on the same grid.
    pub fn modulated(&self, n0: T) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(m, v)| *v * cis(n0 * self.node(m)))
            .collect();
        Self { lo: self.lo, hi: self.hi, values }
    }

    /// max_m |Δ⁴ f_m|, a proxy for h⁴ ‖f⁽⁴⁾‖_∞.
    pub fn fourth_difference(&self) -> T {
        let v = &self.values;
        let at = |i: i64| {
            if i >= 0 && (i as usize) < v.len() {
                v[i as usize]
            } else {
                czero()
            }
        };
        let six = lit::<T>(6.0);
        let four = lit::<T>(4.0);
        (-2..v.len() as i64 + 2)
            .map(|i| (at(i - 2) - at(i - 1) * four + at(i) * six - at(i + 1) * four + at(i + 2)).norm())
            .fold(T::zero(), T::max)
    }
}

/// Uniform grid geometry.
#[derive(Debug, Clone, Copy)]
pub(crate) struct GridGeom<T> {
    pub lo: T,
    pub h: T,
    pub n: usize,
}

impl<T: Real> GridGeom<T> {
    /// Cell index c and local coordinate ν ∈ [0, 1) with y = lo + (c + ν) h.
    pub fn locate(&self, y: T) -> (i64, T) {
        let u = (y - self.lo) / self.h;
        let c = u.floor();
        (c.to_i64().unwrap_or(i64::MIN / 2), u - c)
    }
}

/// Cubic Lagrange weights for nodes at −1, 0, 1, 2 evaluated at ν.
pub(crate) fn lagrange4<T: Real>(nu: T) -> [T; 4] {
    let one = T::one();
    let two = lit::<T>(2.0);
    let six = lit::<T>(6.0);
    [
        -nu * (nu - one) * (nu - two) / six,
        (nu + one) * (nu - one) * (nu - two) / two,
        -(nu + one) * nu * (nu - two) / two,
        (nu + one) * nu * (nu - one) / six,
    ]
}
