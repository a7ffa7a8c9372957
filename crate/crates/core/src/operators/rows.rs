//! Quadrature nodes for one output row of a convolution-type operator.
//!
//! The t-axis is cut at the images of grid cell boundaries (the interpolant is a different cubic
//! in each cell), at the pole t = 0 and at the square-root kink t = −shift. Full cells away from
//! the kink share one Gauss–Legendre pattern, so their nodes form lattices of spacing h; when the
//! output point is a grid node the two cells around the pole are mirror images and the lattice
//! nodes themselves realize the symmetric principal value.

use num_complex::Complex;
use rayon::prelude::*;

use super::sampled::{lagrange4, GridGeom, SampledFunction};
use crate::linalg::CMat;
use crate::quadrature::gauss_legendre;
use crate::scalar::{cis, czero, from_usize, lit, Real};

const MAX_SUBDIVISIONS: usize = 4096;
const PIECES_PER_SUPPORT: f64 = 32.0;

/// Kernel of one output row, `K_row(t)`, integrated against `f(x_row − t)`.
pub trait RowKernel<T: Real>: Sync {
    /// Interval outside which the row kernel vanishes, or `None` for a zero row.
    fn support(&self, row: usize) -> Option<(T, T)>;
    fn eval(&self, row: usize, t: T) -> Complex<T>;
    /// True when the kernel carries a 1/t pole inside its support.
    fn principal_value(&self) -> bool {
        false
    }
    /// (|N|, |b|, shift) for a phase N t + b [t + shift]^{1/2}; used to size sub-pieces.
    fn phase_scales(&self, _row: usize) -> (T, T, T) {
        (T::zero(), T::zero(), T::one())
    }
}

/// Gauss–Legendre pattern on [0, 1] with weights summing to 1.
#[derive(Debug, Clone)]
pub(crate) struct GlRule<T> {
    theta: Vec<T>,
    omega: Vec<T>,
}

impl<T: Real> GlRule<T> {
    pub fn new(n: usize) -> Self {
        let (x, w) = gauss_legendre::<T>(n);
        let half = lit::<T>(0.5);
        Self {
            theta: x.iter().map(|&v| (v + T::one()) * half).collect(),
            omega: w.iter().map(|&v| v * half).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct QNode<T> {
    pub t: T,
    pub w: T,
    /// (cell index m, offset index) for lattice nodes.
    pub lattice: Option<(i64, usize)>,
}

/// Lattice description: node (m, j) sits at origin + m h + offsets[j].
#[derive(Debug, Clone)]
pub(crate) struct Lattice<T> {
    pub origin: T,
    pub h: T,
    pub offsets: Vec<T>,
}

#[derive(Debug, Clone)]
pub(crate) struct NodeSet<T> {
    pub nodes: Vec<QNode<T>>,
    pub lattice: Lattice<T>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct NodeRequest<T> {
    pub x: T,
    pub grid: GridGeom<T>,
    pub support: (T, T),
    pub pv: bool,
    pub n_abs: T,
    pub b_abs: T,
    pub shift: T,
}

fn subdivisions<T: Real>(rate: T, len: T, supp_len: T) -> usize {
    let two = lit::<T>(2.0);
    let by_phase = (rate * len / two).ceil();
    let by_support = (lit::<T>(PIECES_PER_SUPPORT) * len / supp_len).ceil();
    let m = by_phase.max(by_support).max(T::one());
    m.to_usize().unwrap_or(MAX_SUBDIVISIONS).min(MAX_SUBDIVISIONS)
}

fn distance_to<T: Real>(p: T, lo: T, hi: T) -> T {
    if p < lo {
        lo - p
    } else if p > hi {
        p - hi
    } else {
        T::zero()
    }
}

pub(crate) fn build_nodes<T: Real>(req: &NodeRequest<T>, rule: &GlRule<T>) -> NodeSet<T> {
    let g = req.grid;
    let h = g.h;
    let two = lit::<T>(2.0);
    let reach_lo = req.x - g.lo - (from_usize::<T>(g.n) + T::one()) * h;
    let reach_hi = req.x - g.lo + two * h;
    let a = req.support.0.max(reach_lo);
    let b = req.support.1.min(reach_hi);
    let empty = NodeSet { nodes: Vec::new(), lattice: Lattice { origin: T::zero(), h, offsets: Vec::new() } };
    if !(a < b) {
        return empty;
    }
    let supp_len = req.support.1 - req.support.0;
    let mut u0 = (req.x - g.lo) / h;
    if (u0 - u0.round()).abs() < lit(1e-9) {
        u0 = u0.round();
    }
    let tau = u0 - u0.floor();
    let boundary = |m: i64| (tau + lit::<T>(m as f64)) * h;
    let kappa = -req.shift;
    let has_kink = req.b_abs > T::zero() && kappa >= a - two * h && kappa <= b + two * h;
    let kink_rate = |lo: T, hi: T| {
        if req.b_abs > T::zero() {
            let d = distance_to(kappa, lo, hi).max(T::epsilon() * h);
            req.n_abs + req.b_abs / (two * d.sqrt())
        } else {
            req.n_abs
        }
    };

    let mut bps = vec![a, b];
    let m_start = (a / h - tau).floor().to_i64().unwrap_or(0);
    let m_end = (b / h - tau).ceil().to_i64().unwrap_or(0);
    for m in m_start..=m_end {
        let t = boundary(m);
        if a < t && t < b {
            bps.push(t);
        }
    }
    let zero_inside = req.pv && a < T::zero() && T::zero() < b;
    if zero_inside {
        bps.push(T::zero());
    }
    if has_kink && a < kappa && kappa < b {
        bps.push(kappa);
    }
    bps.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let merge = lit::<T>(1e-10) * h;
    bps.dedup_by(|p, q| (*p - *q).abs() <= merge);
    // Exact special points survive deduplication.
    for bp in bps.iter_mut() {
        if zero_inside && bp.abs() <= merge {
            *bp = T::zero();
        }
        if has_kink && (*bp - kappa).abs() <= merge {
            *bp = kappa;
        }
    }

    let full_tol = lit::<T>(1e-9) * h;
    let is_full = |p0: T, p1: T| ((p1 - p0) - h).abs() <= full_tol;
    let near_kink = |p0: T, p1: T| has_kink && distance_to(kappa, p0, p1) < lit::<T>(1.5) * h;

    let lat_dist = if req.b_abs > T::zero() {
        distance_to(kappa, a, b).max(lit::<T>(1.5) * h)
    } else {
        T::infinity()
    };
    let lat_rate = if req.b_abs > T::zero() { req.n_abs + req.b_abs / (two * lat_dist.sqrt()) } else { req.n_abs };
    let m_lat = subdivisions(lat_rate, h, supp_len);
    let mut offsets = Vec::with_capacity(m_lat * rule.theta.len());
    let mut lat_weights = Vec::with_capacity(offsets.capacity());
    let m_lat_t = from_usize::<T>(m_lat);
    for s in 0..m_lat {
        for (th, om) in rule.theta.iter().zip(&rule.omega) {
            offsets.push((from_usize::<T>(s) + *th) / m_lat_t * h);
            lat_weights.push(*om / m_lat_t * h);
        }
    }
    let origin = tau * h;

    let mut nodes = Vec::new();
    let mut consumed = vec![false; bps.len().saturating_sub(1)];
    let mut extra_pieces: Vec<(T, T)> = Vec::new();

    if zero_inside {
        let iz = bps.iter().position(|p| *p == T::zero()).expect("pole breakpoint present");
        let (pl, pr) = (bps[iz - 1], bps[iz + 1]);
        let lattice_ok = is_full(pl, T::zero()) && is_full(T::zero(), pr) && !near_kink(pl, pr);
        if !lattice_ok {
            consumed[iz - 1] = true;
            consumed[iz] = true;
            let r = (-pl).min(pr);
            let m = subdivisions(kink_rate(-r, r), r, supp_len);
            let mt = from_usize::<T>(m);
            for s in 0..m {
                for (th, om) in rule.theta.iter().zip(&rule.omega) {
                    let u = (from_usize::<T>(s) + *th) / mt * r;
                    let w = *om / mt * r;
                    nodes.push(QNode { t: u, w, lattice: None });
                    nodes.push(QNode { t: -u, w, lattice: None });
                }
            }
            if -pl > r {
                extra_pieces.push((pl, -r));
            }
            if pr > r {
                extra_pieces.push((r, pr));
            }
        }
    }

    for i in 0..bps.len() - 1 {
        if consumed[i] {
            continue;
        }
        let (p0, p1) = (bps[i], bps[i + 1]);
        if is_full(p0, p1) && !near_kink(p0, p1) {
            let mid = (p0 + p1) / two;
            let m = (mid / h - tau).floor().to_i64().unwrap_or(0);
            let base = origin + lit::<T>(m as f64) * h;
            for (j, (off, w)) in offsets.iter().zip(&lat_weights).enumerate() {
                nodes.push(QNode { t: base + *off, w: *w, lattice: Some((m, j)) });
            }
        } else {
            extra_pieces.push((p0, p1));
        }
    }

    for (p0, p1) in extra_pieces {
        let len = p1 - p0;
        if !(len > T::zero()) {
            continue;
        }
        if near_kink(p0, p1) && (p0 >= kappa || p1 <= kappa) {
            let right = p0 >= kappa;
            let ua = (p0 - kappa).abs().sqrt();
            let ub = (p1 - kappa).abs().sqrt();
            let (ulo, uhi) = if ua < ub { (ua, ub) } else { (ub, ua) };
            let du = uhi - ulo;
            let rate_u = req.b_abs + two * req.n_abs * uhi;
            let m = subdivisions(rate_u, du, supp_len * du / len);
            let mt = from_usize::<T>(m);
            for s in 0..m {
                for (th, om) in rule.theta.iter().zip(&rule.omega) {
                    let u = ulo + (from_usize::<T>(s) + *th) / mt * du;
                    let t = if right { kappa + u * u } else { kappa - u * u };
                    nodes.push(QNode { t, w: *om / mt * du * two * u, lattice: None });
                }
            }
        } else {
            let m = subdivisions(kink_rate(p0, p1), len, supp_len);
            let mt = from_usize::<T>(m);
            for s in 0..m {
                for (th, om) in rule.theta.iter().zip(&rule.omega) {
                    let t = p0 + (from_usize::<T>(s) + *th) / mt * len;
                    nodes.push(QNode { t, w: *om / mt * len, lattice: None });
                }
            }
        }
    }

    NodeSet { nodes, lattice: Lattice { origin, h, offsets } }
}

/// Adds w K(t) L_k(ν) into the row entries of the four interpolation nodes around x − t.
pub(crate) fn accumulate_row<T: Real, K: Fn(T) -> Complex<T>>(
    nodes: &[QNode<T>],
    x: T,
    grid: GridGeom<T>,
    kernel: K,
    row: &mut [Complex<T>],
) {
    for q in nodes {
        let kv = kernel(q.t) * q.w;
        let (c, nu) = grid.locate(x - q.t);
        for (k, l) in lagrange4(nu).iter().enumerate() {
            let m = c - 1 + k as i64;
            if m >= 0 && (m as usize) < grid.n {
                row[m as usize] += kv * *l;
            }
        }
    }
}

/// Dense matrix whose row i holds the weights of the row-i quadrature against the samples;
/// equivalently, column m is the operator applied to the m-th grid delta-bump.
pub fn assemble_matrix<T: Real, K: RowKernel<T>>(kernel: &K, template: &SampledFunction<T>) -> CMat<T> {
    let grid = template.geometry();
    let rule = GlRule::<T>::new(16);
    let rows: Vec<Vec<Complex<T>>> = (0..grid.n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![czero(); grid.n];
            if let Some(support) = kernel.support(i) {
                let (n_abs, b_abs, shift) = kernel.phase_scales(i);
                let x = template.node(i);
                let req = NodeRequest { x, grid, support, pv: kernel.principal_value(), n_abs, b_abs, shift };
                let set = build_nodes(&req, &rule);
                accumulate_row(&set.nodes, x, grid, |t| kernel.eval(i, t), &mut row);
            }
            row
        })
        .collect();
    CMat::from_row_major(grid.n, grid.n, rows.concat()).expect("square assembly")
}

/// Σ_q g_q e^{iN t_q} in node order.
pub(crate) fn sum_modulated<T: Real>(nodes: &[QNode<T>], g: &[Complex<T>], n_mod: T) -> Complex<T> {
    nodes.iter().zip(g).fold(czero(), |acc, (q, v)| acc + *v * cis(n_mod * q.t))
}
