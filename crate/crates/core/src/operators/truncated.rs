use num_complex::Complex;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use super::chirp::chirp_z;
use super::rows::{build_nodes, sum_modulated, GlRule, NodeRequest, NodeSet};
use super::sampled::SampledFunction;
use crate::error::{Error, Result};
use crate::kernels::SqrtBranch;
use crate::quadrature::QuadResult;
use crate::scalar::{cis, czero, lit, to_f64, Real};

/// Truncation radius, square-root branch and kink shift a of the phase b[t + a]^{1/2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedSpec<T> {
    pub radius: T,
    pub branch: SqrtBranch,
    pub shift: T,
}

impl<T: Real> TruncatedSpec<T> {
    pub fn new(radius: T, branch: SqrtBranch) -> Self {
        Self { radius, branch, shift: T::one() }
    }

    pub fn with_shift(mut self, shift: T) -> Self {
        self.shift = shift;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.radius > T::zero()) {
            return Err(Error::InvalidInput(format!("radius must be positive, got {}", to_f64(self.radius))));
        }
        if !(self.shift > T::zero()) {
            return Err(Error::InvalidInput(format!("shift must be positive, got {}", to_f64(self.shift))));
        }
        Ok(())
    }
}

fn check_modulation<T: Real>(f: &SampledFunction<T>, n_mod: T) -> Result<()> {
    if n_mod != T::zero() {
        let per_period = T::TAU() / (n_mod.abs() * f.spacing());
        if per_period < lit(8.0) {
            return Err(Error::GridTooCoarse { points_per_period: to_f64(per_period) });
        }
    }
    Ok(())
}

fn check_point<T: Real>(f: &SampledFunction<T>, x: T) -> Result<()> {
    if !(x >= f.lo() && x <= f.hi()) {
        return Err(Error::InvalidInput(format!(
            "output point {} outside grid [{}, {}]",
            to_f64(x),
            to_f64(f.lo()),
            to_f64(f.hi())
        )));
    }
    Ok(())
}

/// Nodes and N-independent weights g_q = w_q e^{ib[t_q + a]^{1/2}} f(x − t_q) / t_q.
fn modulation_free<T: Real>(
    f: &SampledFunction<T>,
    b: T,
    spec: &TruncatedSpec<T>,
    x: T,
    rule: &GlRule<T>,
) -> (NodeSet<T>, Vec<Complex<T>>) {
    let req = NodeRequest {
        x,
        grid: f.geometry(),
        support: (-spec.radius, spec.radius),
        pv: true,
        n_abs: T::zero(),
        b_abs: b.abs(),
        shift: spec.shift,
    };
    let set = build_nodes(&req, rule);
    let g = set
        .nodes
        .iter()
        .map(|q| {
            let phase = b * spec.branch.apply(q.t + spec.shift);
            cis(phase) * f.interpolate(x - q.t) * (q.w / q.t)
        })
        .collect();
    (set, g)
}

/// p.v. ∫_{−R}^{R} f(x − t) e^{iNt} e^{ib[t+a]^{1/2}} dt/t with a = `spec.shift`.
pub fn apply_truncated_with<T: Real>(f: &SampledFunction<T>, n_mod: T, b: T, spec: &TruncatedSpec<T>, x: T) -> Result<Complex<T>> {
    spec.validate()?;
    check_modulation(f, n_mod)?;
    check_point(f, x)?;
    let rule = GlRule::new(16);
    let (set, g) = modulation_free(f, b, spec, x, &rule);
    Ok(sum_modulated(&set.nodes, &g, n_mod))
}

/// p.v. ∫_{−R}^{R} f(x − t) e^{iNt} e^{ib[t+1]^{1/2}} dt/t with f the cubic interpolant of the samples.
pub fn apply_truncated<T: Real>(f: &SampledFunction<T>, n_mod: T, b: T, radius: T, branch: SqrtBranch, x: T) -> Result<Complex<T>> {
    apply_truncated_with(f, n_mod, b, &TruncatedSpec::new(radius, branch), x)
}

/// As [`apply_truncated_with`], with an error estimate: |16-node − 8-node| rule difference plus
/// the cubic interpolation bound (9/384) max|Δ⁴f| times Σ|w_q K(t_q)| over |t_q| ≥ h (plus 2 for
/// the cells at the pole, where the interpolation error vanishes at grid nodes).
pub fn apply_truncated_estimate<T: Real>(
    f: &SampledFunction<T>,
    n_mod: T,
    b: T,
    spec: &TruncatedSpec<T>,
    x: T,
) -> Result<QuadResult<T>> {
    spec.validate()?;
    check_modulation(f, n_mod)?;
    check_point(f, x)?;
    let fine_rule = GlRule::new(16);
    let coarse_rule = GlRule::new(8);
    let (fine_set, g) = modulation_free(f, b, spec, x, &fine_rule);
    let (coarse_set, g8) = modulation_free(f, b, spec, x, &coarse_rule);
    let fine = sum_modulated(&fine_set.nodes, &g, n_mod);
    let coarse = sum_modulated(&coarse_set.nodes, &g8, n_mod);
    let h = f.spacing();
    let kernel_mass: T = fine_set.nodes.iter().filter(|q| q.t.abs() >= h).map(|q| q.w / q.t.abs()).sum();
    let interp = lit::<T>(9.0 / 384.0) * f.fourth_difference() * (kernel_mass + lit(2.0));
    Ok(QuadResult {
        value: fine,
        abs_error_estimate: (fine - coarse).norm() + interp,
        evaluations: fine_set.nodes.len() + coarse_set.nodes.len(),
    })
}

/// Pointwise supremum over a finite (N, b) candidate grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxModResult<T> {
    pub points: Vec<T>,
    pub values: Vec<T>,
    pub argmax_n: Vec<T>,
    pub argmax_b: Vec<T>,
}

/// How the sweep over N is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxModRoute {
    /// One modulated sum per candidate; identical to single applications.
    Direct,
    /// Chirp-z transform over an arithmetic N grid (falls back to Direct otherwise).
    ChirpZ,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxModOptions<T> {
    pub route: MaxModRoute,
    /// Output points; `None` means every grid node of f.
    pub points: Option<Vec<T>>,
}

impl<T> Default for MaxModOptions<T> {
    fn default() -> Self {
        Self { route: MaxModRoute::Direct, points: None }
    }
}

fn arithmetic_step<T: Real>(grid: &[T]) -> Option<T> {
    if grid.len() < 2 {
        return None;
    }
    let step = grid[1] - grid[0];
    if !(step > T::zero()) {
        return None;
    }
    let tol = lit::<T>(1e-12) * step.max(grid[0].abs()).max(T::one());
    let ok = grid.windows(2).enumerate().all(|(k, w)| {
        let expected = grid[0] + lit::<T>((k + 1) as f64) * step;
        (w[1] - expected).abs() <= tol
    });
    ok.then_some(step)
}

/// |Σ_q g_q e^{iN_k t_q}| for every N_k = N₀ + kΔ, lattice part via chirp-z per lattice offset.
fn chirp_sweep<T: Real>(set: &NodeSet<T>, g: &[Complex<T>], n0: T, step: T, count: usize, planner: &mut FftPlanner<T>) -> Vec<Complex<T>> {
    let mut out = vec![czero(); count];
    let lat = &set.lattice;
    let lattice_nodes: Vec<(i64, usize, Complex<T>)> = set
        .nodes
        .iter()
        .zip(g)
        .filter_map(|(q, v)| q.lattice.map(|(m, j)| (m, j, *v)))
        .collect();
    if let (Some(m_min), Some(m_max)) = (
        lattice_nodes.iter().map(|e| e.0).min(),
        lattice_nodes.iter().map(|e| e.0).max(),
    ) {
        let len = (m_max - m_min + 1) as usize;
        let offsets = lat.offsets.len();
        let mut columns = vec![vec![czero(); len]; offsets];
        for (m, j, v) in &lattice_nodes {
            let l = (*m - m_min) as usize;
            columns[*j][l] = *v * cis(n0 * lit::<T>(l as f64) * lat.h);
        }
        for (j, col) in columns.iter().enumerate() {
            let transformed = chirp_z(col, step * lat.h, count, planner);
            let beta = lat.origin + lit::<T>(m_min as f64) * lat.h + lat.offsets[j];
            for (k, x) in transformed.iter().enumerate() {
                let nk = n0 + lit::<T>(k as f64) * step;
                out[k] += *x * cis(nk * beta);
            }
        }
    }
    for (q, v) in set.nodes.iter().zip(g) {
        if q.lattice.is_none() {
            for (k, o) in out.iter_mut().enumerate() {
                let nk = n0 + lit::<T>(k as f64) * step;
                *o += *v * cis(nk * q.t);
            }
        }
    }
    out
}

/// Pointwise maximum of |apply_truncated(f, N, b)| over all grid nodes of f, direct route.
pub fn max_modulation<T: Real>(
    f: &SampledFunction<T>,
    n_grid: &[T],
    b_grid: &[T],
    radius: T,
    branch: SqrtBranch,
) -> Result<MaxModResult<T>> {
    max_modulation_with(f, n_grid, b_grid, &TruncatedSpec::new(radius, branch), &MaxModOptions::default())
}

/// Candidates are visited b-major, N-minor; ties keep the first maximizer.
pub fn max_modulation_with<T: Real>(
    f: &SampledFunction<T>,
    n_grid: &[T],
    b_grid: &[T],
    spec: &TruncatedSpec<T>,
    opts: &MaxModOptions<T>,
) -> Result<MaxModResult<T>> {
    spec.validate()?;
    if n_grid.is_empty() || b_grid.is_empty() {
        return Err(Error::InvalidInput("candidate grids must be non-empty".into()));
    }
    for &n in n_grid {
        check_modulation(f, n)?;
    }
    let points = opts.points.clone().unwrap_or_else(|| f.nodes());
    for &x in &points {
        check_point(f, x)?;
    }
    let step = match opts.route {
        MaxModRoute::ChirpZ => arithmetic_step(n_grid),
        MaxModRoute::Direct => None,
    };
    let rows: Vec<(T, T, T)> = points
        .par_iter()
        .map_init(FftPlanner::new, |planner, &x| {
            let rule = GlRule::new(16);
            let mut best = (-T::one(), n_grid[0], b_grid[0]);
            for &b in b_grid {
                let (set, g) = modulation_free(f, b, spec, x, &rule);
                let sums: Vec<Complex<T>> = match step {
                    Some(d) => chirp_sweep(&set, &g, n_grid[0], d, n_grid.len(), planner),
                    None => n_grid.iter().map(|&n| sum_modulated(&set.nodes, &g, n)).collect(),
                };
                for (&n, s) in n_grid.iter().zip(&sums) {
                    let v = s.norm();
                    if v > best.0 {
                        best = (v, n, b);
                    }
                }
            }
            best
        })
        .collect();
    Ok(MaxModResult {
        points,
        values: rows.iter().map(|r| r.0).collect(),
        argmax_n: rows.iter().map(|r| r.1).collect(),
        argmax_b: rows.iter().map(|r| r.2).collect(),
    })
}
