//! Best approximation of b√(1+t) in L¹([−1/2, 1/2], dt/|t|) under P(0) = b.
//!
//! Writing P(t) = b + t Q(t) turns the weighted error into ∫ |b g(t) − Q(t)| dt with
//! g(t) = 1/(√(1+t) + 1), which is discretized on Chebyshev nodes and solved as an L¹ fit.
//! Q is expanded in T_k(2t).

mod simplex;

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::quadrature::{integrate_adaptive, Interval};
use crate::scalar::{from_usize, lit, to_f64, Real};
use simplex::{solve, BoundedLp};

/// Nodes per unknown used when no node count is given.
pub const DEFAULT_NODE_FACTOR: usize = 50;
/// Largest degree accepted by the sweeps.
pub const MAX_DEGREE: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyApproxResult<T> {
    pub b: T,
    pub degree: usize,
    /// Monomial coefficients of P, with coeffs[0] = b.
    pub coeffs: Vec<T>,
    /// Coefficients of Q in T_k(2t), k < degree.
    pub cheb_coeffs: Vec<T>,
    /// ∫_{−1/2}^{1/2} |b√(1+t) − P(t)| dt/|t| by adaptive quadrature.
    pub error: T,
    /// Optimal value of the discrete problem.
    pub discrete_objective: T,
}

impl<T: Real> PolyApproxResult<T> {
    pub fn eval(&self, t: T) -> T {
        self.b + t * eval_q(&self.cheb_coeffs, t)
    }
}

/// g(t) = (√(1+t) − 1)/t, evaluated without cancellation.
pub fn g_ratio<T: Real>(t: T) -> T {
    T::one() / ((T::one() + t).sqrt() + T::one())
}

/// Σ c_k T_k(2t) by Clenshaw.
fn eval_q<T: Real>(c: &[T], t: T) -> T {
    let x = t + t;
    let (mut b1, mut b2) = (T::zero(), T::zero());
    for &ck in c.iter().rev() {
        let b0 = ck + (x + x) * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    b1 - x * b2
}

/// T_0(2t), …, T_{n−1}(2t).
fn cheb_row<T: Real>(t: T, n: usize) -> Vec<T> {
    let x = t + t;
    let mut row = Vec::with_capacity(n);
    let (mut p, mut c) = (T::one(), x);
    for k in 0..n {
        match k {
            0 => row.push(T::one()),
            1 => row.push(x),
            _ => {
                let next = (x + x) * c - p;
                p = c;
                c = next;
                row.push(next);
            }
        }
    }
    row
}

/// Monomial coefficients of Σ c_k T_k(2t).
fn cheb_to_monomial<T: Real>(c: &[T]) -> Vec<T> {
    let n = c.len();
    let mut out = vec![T::zero(); n];
    let mut prev = vec![T::zero(); n];
    let mut cur = vec![T::zero(); n];
    for k in 0..n {
        let next = match k {
            0 => {
                let mut v = vec![T::zero(); n];
                v[0] = T::one();
                v
            }
            1 => {
                let mut v = vec![T::zero(); n];
                v[1] = lit(2.0);
                v
            }
            _ => {
                let mut v = vec![T::zero(); n];
                for i in 0..n - 1 {
                    v[i + 1] += lit::<T>(4.0) * cur[i];
                }
                for i in 0..n {
                    v[i] -= prev[i];
                }
                v
            }
        };
        for i in 0..n {
            out[i] += c[k] * next[i];
        }
        prev = std::mem::replace(&mut cur, next);
    }
    out
}

/// Chebyshev–Gauss nodes on [−1/2, 1/2] with weights for dt.
fn nodes<T: Real>(count: usize) -> Vec<(T, T)> {
    let m = from_usize::<T>(count);
    let half = lit::<T>(0.5);
    (0..count)
        .map(|i| {
            let theta = T::PI() * (lit::<T>(2.0) * from_usize::<T>(i) + T::one()) / (lit::<T>(2.0) * m);
            let x = theta.cos();
            (half * x, half * T::PI() / m * theta.sin())
        })
        .collect()
}

/// ∫_{−1/2}^{1/2} |b g − Q| dt, integrating between sign changes of the residual.
fn continuous_error<T: Real>(b: T, c: &[T], tol: T) -> Result<T> {
    let r = |t: T| b * g_ratio(t) - eval_q(c, t);
    let half = lit::<T>(0.5);
    let samples = 64 * (c.len() + 1);
    let step = T::one() / from_usize::<T>(samples);
    let mut cuts = vec![-half];
    let mut prev_t = -half;
    let mut prev_v = r(-half);
    for i in 1..=samples {
        let t = -half + step * from_usize::<T>(i);
        let v = r(t);
        if prev_v * v < T::zero() {
            let (mut lo, mut hi, mut flo) = (prev_t, t, prev_v);
            for _ in 0..60 {
                let mid = (lo + hi) * half;
                let fm = r(mid);
                if fm * flo <= T::zero() {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            cuts.push((lo + hi) * half);
        }
        prev_t = t;
        prev_v = v;
    }
    cuts.push(half);
    cuts.dedup();
    let pieces = cuts.len() - 1;
    let piece_tol = tol / from_usize::<T>(pieces.max(1));
    let mut total = T::zero();
    for w in cuts.windows(2) {
        if w[1] > w[0] {
            let res = integrate_adaptive(|t: T| Complex::new(r(t).abs(), T::zero()), Interval::new(w[0], w[1])?, piece_tol)?;
            total += res.value.re;
        }
    }
    Ok(total)
}

/// Minimizes Σ_i w_i |b g(t_i) − Q(t_i)| over deg Q < degree, P = b + t Q.
pub fn best_weighted_l1<T: Real>(b: T, degree: usize, node_count: usize) -> Result<PolyApproxResult<T>> {
    if !(b > T::zero() && b.is_finite()) {
        return Err(Error::InvalidInput(format!("b must be positive, got {b}")));
    }
    if degree > MAX_DEGREE {
        return Err(Error::InvalidInput(format!("degree must be ≤ {MAX_DEGREE}, got {degree}")));
    }
    if node_count < DEFAULT_NODE_FACTOR * (degree + 1) {
        return Err(Error::InvalidInput(format!(
            "need at least {} nodes for degree {degree}, got {node_count}",
            DEFAULT_NODE_FACTOR * (degree + 1)
        )));
    }
    let pts = nodes::<T>(node_count);
    let rhs: Vec<T> = pts.iter().map(|(t, _)| b * g_ratio(*t)).collect();
    let residual_sum = |c: &[T]| -> T { pts.iter().zip(&rhs).map(|((t, w), r)| *w * (*r - eval_q(c, *t)).abs()).sum() };
    let (cheb, discrete_objective) = if degree == 0 {
        (Vec::new(), residual_sum(&[]))
    } else {
        // Dual: max Σ r_i u_i subject to Φᵀu = 0, |u_i| ≤ w_i; the equality duals are the coefficients.
        let n = degree;
        let mut a = Mat::zeros(n, node_count);
        for (i, (t, _)) in pts.iter().enumerate() {
            for (k, v) in cheb_row(*t, n).into_iter().enumerate() {
                a[(k, i)] = v;
            }
        }
        let lp = BoundedLp {
            a,
            rhs: vec![T::zero(); n],
            cost: rhs.clone(),
            lower: pts.iter().map(|(_, w)| -*w).collect(),
            upper: pts.iter().map(|(_, w)| *w).collect(),
        };
        let sol = solve(&lp, 200 * node_count)?;
        let primal = residual_sum(&sol.duals);
        if (primal - sol.objective).abs() > lit::<T>(1e-8) * primal.max(T::one()) {
            log::warn!("duality gap {} at b = {}, degree {degree}", to_f64(primal - sol.objective), to_f64(b));
        }
        (sol.duals, primal)
    };
    let tol = lit::<T>(1e-11).max(T::epsilon() * lit(100.0)) * b.max(T::one());
    let error = continuous_error(b, &cheb, tol)?;
    let mut coeffs = vec![b];
    coeffs.extend(cheb_to_monomial(&cheb));
    Ok(PolyApproxResult { b, degree, coeffs, cheb_coeffs: cheb, error, discrete_objective })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MinDegree {
    Found(usize),
    NotFound { d_max: usize },
}

impl MinDegree {
    pub fn degree(self) -> Option<usize> {
        match self {
            MinDegree::Found(d) => Some(d),
            MinDegree::NotFound { .. } => None,
        }
    }
}

/// Smallest d ≤ d_max whose best error is ≤ 1, with node_factor·(d+1) nodes.
pub fn min_degree_for_unit_error<T: Real>(b: T, d_max: usize, node_factor: usize) -> Result<MinDegree> {
    if d_max > MAX_DEGREE {
        return Err(Error::InvalidInput(format!("d_max must be ≤ {MAX_DEGREE}, got {d_max}")));
    }
    for d in 0..=d_max {
        let r = best_weighted_l1(b, d, node_factor.max(DEFAULT_NODE_FACTOR) * (d + 1))?;
        if r.error <= T::one() {
            return Ok(MinDegree::Found(d));
        }
    }
    Ok(MinDegree::NotFound { d_max })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeCurve<T> {
    pub pairs: Vec<(T, MinDegree)>,
}

impl<T: Real> DegreeCurve<T> {
    /// NotFound counts as larger than every found degree.
    pub fn is_nondecreasing(&self) -> bool {
        let key = |m: &MinDegree| m.degree().unwrap_or(usize::MAX);
        self.pairs.windows(2).all(|w| key(&w[0].1) <= key(&w[1].1))
    }

    /// d_min(last) − d_min(first) when both are found.
    pub fn total_growth(&self) -> Option<i64> {
        let first = self.pairs.first()?.1.degree()?;
        let last = self.pairs.last()?.1.degree()?;
        Some(last as i64 - first as i64)
    }
}

pub fn degree_curve<T: Real>(b_list: &[T], d_max: usize, node_factor: usize) -> Result<DegreeCurve<T>> {
    let pairs = b_list
        .par_iter()
        .map(|&b| Ok((b, min_degree_for_unit_error(b, d_max, node_factor)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DegreeCurve { pairs })
}
