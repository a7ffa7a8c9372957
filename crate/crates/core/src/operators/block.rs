use num_complex::Complex;
use rayon::prelude::*;

use super::linearization::LinearizationChoice;
use super::rows::{build_nodes, GlRule, NodeRequest, RowKernel};
use super::sampled::SampledFunction;
use crate::error::{Error, Result};
use crate::kernels::{bump_psi0, SqrtBranch};
use crate::linalg::CMat;
use crate::quadrature::{integrate_oscillatory, FnPhase, Interval, QuadResult};
use crate::scalar::{cis, czero, lit, pow2, to_f64, Real};

/// Which piece of the dyadic decomposition a [`BlockOperator`] represents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlockFamily<T> {
    /// Cutoff ψ₀(2^{−j} b(x)² t).
    Part1 { j: i32 },
    /// Cutoff ψ₀(2^{j−2k} t) on rows with b(x)/2^k ∈ (1, 2].
    Part2 { k: i32, j: i32 },
    /// Part 1 cutoff, active only on rows with j ≥ 2 log₂ b(x) − 2.
    Outer { j: i32 },
    /// Principal value over [−R, R] without cutoff.
    FullTruncated { radius: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator<T> {
    family: BlockFamily<T>,
    branch: SqrtBranch,
    linearization: LinearizationChoice<T>,
    shift: T,
}

impl<T: Real> BlockOperator<T> {
    pub fn new(family: BlockFamily<T>, branch: SqrtBranch, linearization: LinearizationChoice<T>) -> Result<Self> {
        match family {
            BlockFamily::Part1 { j } | BlockFamily::Outer { j } if j < 0 => {
                return Err(Error::InvalidInput(format!("block index j must be ≥ 0, got {j}")));
            }
            BlockFamily::Part2 { k, j } => {
                let lo = (11 * k + 5).div_euclid(6);
                if k < 1 || j < lo || j > 2 * k {
                    return Err(Error::InvalidInput(format!("Part 2 block needs k ≥ 1 and j ∈ [{lo}, {}], got k = {k}, j = {j}", 2 * k)));
                }
            }
            BlockFamily::FullTruncated { radius } if !(radius > T::zero()) => {
                return Err(Error::InvalidInput(format!("radius must be positive, got {}", to_f64(radius))));
            }
            _ => {}
        }
        Ok(Self { family, branch, linearization, shift: T::one() })
    }

    pub fn family(&self) -> BlockFamily<T> {
        self.family
    }

    pub fn branch(&self) -> SqrtBranch {
        self.branch
    }

    pub fn linearization(&self) -> &LinearizationChoice<T> {
        &self.linearization
    }

    /// Centre σ of the cutoff support [σ/2, 2σ] for a given b; `None` for FullTruncated.
    pub fn scale(&self, b: T) -> Option<T> {
        match self.family {
            BlockFamily::Part1 { j } | BlockFamily::Outer { j } => Some(pow2(lit::<T>(j as f64)) / (b * b)),
            BlockFamily::Part2 { k, j } => Some(pow2(lit::<T>((2 * k - j) as f64))),
            BlockFamily::FullTruncated { .. } => None,
        }
    }

    fn row_active(&self, row: usize) -> bool {
        if !self.linearization.is_active(row) {
            return false;
        }
        let b = self.linearization.b_at(row);
        match self.family {
            BlockFamily::Outer { j } => lit::<T>(j as f64) >= lit::<T>(2.0) * b.log2() - lit(2.0),
            BlockFamily::Part2 { k, .. } => {
                let bk = b / pow2(lit::<T>(k as f64));
                bk > T::one() && bk <= lit(2.0)
            }
            _ => true,
        }
    }

    /// Cutoff times the indicator of the row, without 1/t and phase.
    fn cutoff(&self, row: usize, t: T) -> T {
        match self.scale(self.linearization.b_at(row)) {
            Some(sigma) => bump_psi0(t / sigma),
            None => T::one(),
        }
    }

    /// N t + b [t + shift]^{1/2} for the row.
    fn phase(&self, row: usize, t: T) -> T {
        self.linearization.n_at(row) * t + self.linearization.b_at(row) * self.branch.apply(t + self.shift)
    }

    fn phase_derivative(&self, row: usize, t: T) -> T {
        let u = t + self.shift;
        let half = lit::<T>(0.5);
        let slope = match self.branch {
            SqrtBranch::Abs => u.signum() * half / u.abs().sqrt(),
            SqrtBranch::Signed => half / u.abs().sqrt(),
        };
        self.linearization.n_at(row) + self.linearization.b_at(row) * slope
    }
}

impl<T: Real> RowKernel<T> for BlockOperator<T> {
    fn support(&self, row: usize) -> Option<(T, T)> {
        if !self.row_active(row) {
            return None;
        }
        match self.family {
            BlockFamily::FullTruncated { radius } => Some((-radius, radius)),
            _ => {
                let sigma = self.scale(self.linearization.b_at(row))?;
                Some((sigma * lit(0.5), sigma * lit(2.0)))
            }
        }
    }

    fn eval(&self, row: usize, t: T) -> Complex<T> {
        cis(self.phase(row, t)) * (self.cutoff(row, t) / t)
    }

    fn principal_value(&self) -> bool {
        matches!(self.family, BlockFamily::FullTruncated { .. })
    }

    fn phase_scales(&self, row: usize) -> (T, T, T) {
        (self.linearization.n_at(row).abs(), self.linearization.b_at(row), self.shift)
    }
}

/// Output of [`assemble_block`]; `empty` is set when no row support meets the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOutput<T> {
    pub values: SampledFunction<T>,
    pub empty: bool,
}

fn check_alignment<T: Real>(block: &BlockOperator<T>, f: &SampledFunction<T>) -> Result<()> {
    if block.linearization.len() != f.len() {
        return Err(Error::InvalidInput(format!(
            "linearization has {} rows but the grid has {} nodes",
            block.linearization.len(),
            f.len()
        )));
    }
    let h = f.spacing();
    for i in 0..f.len() {
        if !block.row_active(i) {
            continue;
        }
        let n = block.linearization.n_at(i).abs();
        if n > T::zero() {
            let per_period = T::TAU() / (n * h);
            if per_period < lit(8.0) {
                return Err(Error::GridTooCoarse { points_per_period: to_f64(per_period) });
            }
        }
        // The square-root phase lives in the kernel and is integrated by GL16 per grid cell, so
        // one period per cell is the limit; |φ′| is largest at the inner edge σ/2 of the support.
        let b = block.linearization.b_at(i);
        if let Some(sigma) = block.scale(b) {
            let rate = b.abs() / (lit::<T>(2.0) * (sigma * lit(0.5) + block.shift).sqrt());
            let per_period = T::TAU() / (rate * h);
            if per_period < T::one() {
                return Err(Error::GridTooCoarse { points_per_period: to_f64(per_period) });
            }
        }
    }
    Ok(())
}

/// output[i] = ∫ f(x_i − t) e^{iN(x_i)t} e^{ib(x_i)[t+1]^{1/2}} (cutoff) dt/t, f cubic-interpolated.
pub fn assemble_block<T: Real>(block: &BlockOperator<T>, f: &SampledFunction<T>) -> Result<BlockOutput<T>> {
    check_alignment(block, f)?;
    let grid = f.geometry();
    let rule = GlRule::<T>::new(16);
    let rows: Vec<(Complex<T>, bool)> = (0..f.len())
        .into_par_iter()
        .map(|i| {
            let Some(support) = block.support(i) else {
                return (czero(), false);
            };
            let (n_abs, b_abs, shift) = block.phase_scales(i);
            let x = f.node(i);
            let req = NodeRequest { x, grid, support, pv: block.principal_value(), n_abs, b_abs, shift };
            let set = build_nodes(&req, &rule);
            let value = set
                .nodes
                .iter()
                .fold(czero(), |acc, q| acc + block.eval(i, q.t) * f.interpolate(x - q.t) * q.w);
            (value, !set.nodes.is_empty())
        })
        .collect();
    let empty = rows.iter().all(|r| !r.1);
    let values = f.with_values(rows.into_iter().map(|r| r.0).collect())?;
    Ok(BlockOutput { values, empty })
}

/// Dense discretization on the grid of `template`: (W f)_i = Σ_m W_{im} f_m.
pub fn block_matrix<T: Real>(block: &BlockOperator<T>, template: &SampledFunction<T>) -> Result<CMat<T>> {
    check_alignment(block, template)?;
    Ok(super::rows::assemble_matrix(block, template))
}

/// Kernel of W W* between grid nodes x_i and y_k:
/// ∫ S_{x}(s) conj(S_{y}(s − ξ)) ds with ξ = x − y and S the row kernel.
pub fn ttstar_kernel<T: Real>(
    block: &BlockOperator<T>,
    grid: &SampledFunction<T>,
    i: usize,
    k: usize,
    tol: T,
) -> Result<QuadResult<T>> {
    if block.principal_value() {
        return Err(Error::InvalidInput("TT* kernel is only defined for cut-off blocks".into()));
    }
    if block.linearization.len() != grid.len() || i >= grid.len() || k >= grid.len() {
        return Err(Error::InvalidInput("row indices must lie on the linearization grid".into()));
    }
    let zero = QuadResult { value: czero(), abs_error_estimate: T::zero(), evaluations: 0 };
    let (Some(sx), Some(sy)) = (block.support(i), block.support(k)) else {
        return Ok(zero);
    };
    let xi = grid.node(i) - grid.node(k);
    let lo = sx.0.max(sy.0 + xi);
    let hi = sx.1.min(sy.1 + xi);
    if !(lo < hi) {
        return Ok(zero);
    }
    let amplitude = |s: T| {
        let ay = block.cutoff(k, s - xi) / (s - xi);
        let ax = block.cutoff(i, s) / s;
        Complex::new(ax * ay, T::zero())
    };
    let phase = FnPhase::new(
        |s: T| block.phase(i, s) - block.phase(k, s - xi),
        |s: T| block.phase_derivative(i, s) - block.phase_derivative(k, s - xi),
    );
    integrate_oscillatory(amplitude, phase, Interval::new(lo, hi)?, tol)
}

/// Grid of n nodes spanning `width` block scales, centred at 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridTemplate<T> {
    pub n: usize,
    pub width: T,
}

impl<T: Real> GridTemplate<T> {
    pub fn new(n: usize, width: T) -> Self {
        Self { n, width }
    }

    pub fn for_scale(&self, sigma: T) -> Result<SampledFunction<T>> {
        let half = self.width * sigma * lit(0.5);
        SampledFunction::zeros(-half, half, self.n)
    }
}
