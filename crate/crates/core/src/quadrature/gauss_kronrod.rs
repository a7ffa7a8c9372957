use num_complex::Complex;

use super::{Interval, QuadResult};
use crate::error::{Error, Result};
use crate::scalar::{czero, lit, to_f64, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Limits for the adaptive driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdaptiveOptions {
    pub max_subdivisions: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self { max_subdivisions: 4000 }
    }
}

/// Estimate for one panel of the adaptive driver.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Panel<T> {
    pub lo: T,
    pub hi: T,
    pub value: Complex<T>,
    pub err: T,
    pub evaluations: usize,
}

fn checked<T: Real, F: Fn(T) -> Complex<T>>(f: &F, t: T) -> Result<Complex<T>> {
    let v = f(t);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { at: to_f64(t) })
    }
}

/// One 15-point Kronrod / 7-point Gauss panel with the QUADPACK error heuristic.
pub(crate) fn qk15<T: Real, F: Fn(T) -> Complex<T>>(f: &F, lo: T, hi: T) -> Result<Panel<T>> {
    let two = lit::<T>(2.0);
    let centr = (lo + hi) / two;
    let hlgth = (hi - lo) / two;
    let fc = checked(f, centr)?;
    let mut resg = fc * lit::<T>(WG[3]);
    let mut resk = fc * lit::<T>(WGK[7]);
    let mut resabs = fc.norm() * lit::<T>(WGK[7]);
    let mut fv1 = [czero::<T>(); 7];
    let mut fv2 = [czero::<T>(); 7];
    for j in 0..7 {
        let absc = hlgth * lit::<T>(XGK[j]);
        let f1 = checked(f, centr - absc)?;
        let f2 = checked(f, centr + absc)?;
        fv1[j] = f1;
        fv2[j] = f2;
        let wk = lit::<T>(WGK[j]);
        resk += (f1 + f2) * wk;
        resabs += (f1.norm() + f2.norm()) * wk;
        if j % 2 == 1 {
            resg += (f1 + f2) * lit::<T>(WG[j / 2]);
        }
    }
    let reskh = resk / two;
    let mut resasc = lit::<T>(WGK[7]) * (fc - reskh).norm();
    for j in 0..7 {
        resasc += lit::<T>(WGK[j]) * ((fv1[j] - reskh).norm() + (fv2[j] - reskh).norm());
    }
    let h = hlgth.abs();
    let value = resk * hlgth;
    let resabs = resabs * h;
    let resasc = resasc * h;
    let mut err = ((resk - resg) * hlgth).norm();
    if resasc != T::zero() && err != T::zero() {
        err = resasc * T::one().min((lit::<T>(200.0) * err / resasc).powf(lit(1.5)));
    }
    let floor = lit::<T>(50.0) * T::epsilon() * resabs;
    if resabs > T::min_positive_value() / (lit::<T>(50.0) * T::epsilon()) {
        err = err.max(floor);
    }
    Ok(Panel { lo, hi, value, err, evaluations: 15 })
}

/// Global-priority bisection: split the panel with the largest estimate until the total is ≤ tol.
pub(crate) fn adaptive_driver<T, E>(iv: Interval<T>, tol: T, limit: usize, mut eval: E) -> Result<QuadResult<T>>
where
    T: Real,
    E: FnMut(T, T) -> Result<Panel<T>>,
{
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let mut panels = vec![eval(iv.lo(), iv.hi())?];
    let mut frozen = vec![false];
    let mut evaluations = panels[0].evaluations;
    loop {
        let total_err: T = panels.iter().map(|p| p.err).sum();
        if total_err <= tol {
            let value = panels.iter().fold(czero(), |acc, p| acc + p.value);
            return Ok(QuadResult { value, abs_error_estimate: total_err, evaluations });
        }
        let worst = (0..panels.len())
            .filter(|&i| !frozen[i])
            .max_by(|&a, &b| panels[a].err.partial_cmp(&panels[b].err).unwrap());
        let Some(worst) = worst else {
            return Err(Error::MaxSubdivisions { limit, estimate: to_f64(total_err), tol: to_f64(tol) });
        };
        if panels.len() >= limit {
            return Err(Error::MaxSubdivisions { limit, estimate: to_f64(total_err), tol: to_f64(tol) });
        }
        let Panel { lo, hi, .. } = panels[worst];
        let mid = (lo + hi) / lit::<T>(2.0);
        let scale = lo.abs().max(hi.abs()).max(T::min_positive_value());
        if !(lo < mid && mid < hi) || hi - lo <= lit::<T>(16.0) * T::epsilon() * scale {
            frozen[worst] = true;
            continue;
        }
        let left = eval(lo, mid)?;
        let right = eval(mid, hi)?;
        evaluations += left.evaluations + right.evaluations;
        panels[worst] = left;
        panels.push(right);
        frozen.push(false);
    }
}

/// Adaptive G7/K15 quadrature of a complex integrand over `iv`.
pub fn integrate_adaptive<T, F>(f: F, iv: Interval<T>, tol: T) -> Result<QuadResult<T>>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    integrate_adaptive_with(f, iv, tol, AdaptiveOptions::default())
}

pub fn integrate_adaptive_with<T, F>(f: F, iv: Interval<T>, tol: T, opts: AdaptiveOptions) -> Result<QuadResult<T>>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    adaptive_driver(iv, tol, opts.max_subdivisions, |lo, hi| qk15(&f, lo, hi))
}

/// Gauss–Legendre nodes and weights on [−1, 1], ascending.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "Gauss-Legendre needs at least one node");
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes.into_iter().map(lit).collect(), weights.into_iter().map(lit).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre::<f64>(16);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn qk15_exact_on_low_degree() {
        let p = qk15(&|t: f64| Complex::new(t * t, 0.0), 0.0, 1.0).unwrap();
        assert!((p.value.re - 1.0 / 3.0).abs() < 1e-15);
    }
}
