//! L² norms of discretized blocks, decay fits and the oscillatory-lemma envelopes.

use std::ops::RangeInclusive;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{bump_psi0, PhaseSpec, PhaseVariant, SqrtBranch};
use crate::linalg::CMat;
use crate::operators::{block_matrix, BlockFamily, BlockOperator, GridTemplate, LinearizationChoice};
use crate::quadrature::{integrate_oscillatory, Interval};
use crate::scalar::{czero, from_usize, lit, pow2, to_f64, Real};

const START_SEED: u64 = 0x5eed_0001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate<T> {
    pub value: T,
    pub iterations: usize,
    pub residual: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit<T> {
    /// Slope of log₂(norm) against j.
    pub rate: T,
    pub intercept: T,
    pub r_squared: T,
}

fn norm2<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Largest singular value of `w` by power iteration on H = W W^H.
///
/// Stops when the Ritz residual ‖Hv − λv‖/λ ≤ tol.
pub fn l2_norm_matrix<T: Real>(w: &CMat<T>, tol: T, max_iter: usize) -> Result<NormEstimate<T>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let h = w.gram_outer();
    let scale = h.as_slice().iter().fold(T::zero(), |m, z| m.max(z.norm()));
    let defect = h.hermitian_defect();
    if defect > lit::<T>(1e-8) * scale.max(T::min_positive_value()) {
        return Err(Error::InvalidInput(format!("T T* is not Hermitian (defect {})", to_f64(defect))));
    }
    if scale == T::zero() {
        return Ok(NormEstimate { value: T::zero(), iterations: 0, residual: T::zero() });
    }
    let n = h.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut v: Vec<Complex<T>> = (0..n)
        .map(|_| Complex::new(lit::<T>(rng.gen_range(-1.0..1.0)), lit::<T>(rng.gen_range(-1.0..1.0))))
        .collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|z| *z = *z / nv);
    let mut residual = T::infinity();
    let mut lambda = T::zero();
    for it in 1..=max_iter {
        let hv = h.mul_vec(&v);
        lambda = v.iter().zip(&hv).fold(czero::<T>(), |acc, (a, b)| acc + a.conj() * *b).re;
        let r: Vec<Complex<T>> = hv.iter().zip(&v).map(|(a, b)| *a - *b * lambda).collect();
        if lambda > T::zero() {
            residual = norm2(&r) / lambda;
            if residual <= tol {
                return Ok(NormEstimate { value: lambda.sqrt(), iterations: it, residual });
            }
        }
        let nh = norm2(&hv);
        if nh == T::zero() {
            return Ok(NormEstimate { value: T::zero(), iterations: it, residual: T::zero() });
        }
        v = hv.into_iter().map(|z| z / nh).collect();
    }
    if !lambda.is_finite() {
        return Err(Error::NonFinite { at: to_f64(lambda) });
    }
    Err(Error::NoConvergence { iterations: max_iter, residual: to_f64(residual) })
}

/// Dense reference: √(largest eigenvalue of W W^H) by Hermitian Jacobi.
pub fn l2_norm_dense<T: Real>(w: &CMat<T>) -> T {
    w.spectral_norm_dense()
}

/// ‖block‖ on the grid of `template`.
pub fn l2_norm_power_iteration<T: Real>(
    block: &BlockOperator<T>,
    template: &crate::operators::SampledFunction<T>,
    tol: T,
    max_iter: usize,
) -> Result<NormEstimate<T>> {
    l2_norm_matrix(&block_matrix(block, template)?, tol, max_iter)
}

/// Block family swept by [`decay_curve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DecayFamily {
    Part1,
    Part2 { k: i32 },
    Outer,
}

/// Fixed parameters of a decay sweep: constant linearization (N, b) and the grid template.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecaySetup<T> {
    pub family: DecayFamily,
    pub n_mod: T,
    pub b: T,
    pub branch: SqrtBranch,
    pub template: GridTemplate<T>,
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Real> DecaySetup<T> {
    fn window(&self, j_range: &RangeInclusive<i32>) -> RangeInclusive<i32> {
        let (lo, hi) = match self.family {
            DecayFamily::Part1 | DecayFamily::Outer => (0, i32::MAX),
            DecayFamily::Part2 { k } => ((11 * k + 5).div_euclid(6), 2 * k),
        };
        (*j_range.start()).max(lo)..=(*j_range.end()).min(hi)
    }

    fn block(&self, j: i32) -> Result<BlockOperator<T>> {
        let family = match self.family {
            DecayFamily::Part1 => BlockFamily::Part1 { j },
            DecayFamily::Part2 { k } => BlockFamily::Part2 { k, j },
            DecayFamily::Outer => BlockFamily::Outer { j },
        };
        let lin = LinearizationChoice::constant(self.template.n, self.n_mod, self.b)?;
        BlockOperator::new(family, self.branch, lin)
    }

    /// Block at scale j together with its grid.
    pub fn instance(&self, j: i32) -> Result<(BlockOperator<T>, crate::operators::SampledFunction<T>)> {
        let block = self.block(j)?;
        let sigma = block.scale(self.b).expect("cut-off family");
        let grid = self.template.for_scale(sigma)?;
        Ok((block, grid))
    }
}

/// One norm per j in `j_range` ∩ the family's window; empty when the intersection is empty.
pub fn decay_curve<T: Real>(setup: &DecaySetup<T>, j_range: RangeInclusive<i32>) -> Result<Vec<(i32, NormEstimate<T>)>> {
    let window = setup.window(&j_range);
    if window.is_empty() {
        return Ok(Vec::new());
    }
    window
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|j| {
            let (block, grid) = setup.instance(j)?;
            Ok((j, l2_norm_power_iteration(&block, &grid, setup.tol, setup.max_iter)?))
        })
        .collect()
}

/// Least squares fit of log₂(norm) against j.
pub fn fit_decay<T: Real>(points: &[(i32, T)]) -> Result<DecayFit<T>> {
    if points.len() < 4 {
        return Err(Error::NeedAtLeast4Points(points.len()));
    }
    if let Some(&(j, v)) = points.iter().find(|p| !(p.1 > T::zero())) {
        return Err(Error::NonPositiveNorm { j, value: to_f64(v) });
    }
    let n = from_usize::<T>(points.len());
    let xs: Vec<T> = points.iter().map(|p| lit::<T>(p.0 as f64)).collect();
    let ys: Vec<T> = points.iter().map(|p| p.1.log2()).collect();
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let sxx: T = xs.iter().map(|x| (*x - mx) * (*x - mx)).sum();
    let sxy: T = xs.iter().zip(&ys).map(|(x, y)| (*x - mx) * (*y - my)).sum();
    let syy: T = ys.iter().map(|y| (*y - my) * (*y - my)).sum();
    if sxx == T::zero() {
        return Err(Error::InvalidInput("fit needs at least two distinct j".into()));
    }
    let rate = sxy / sxx;
    let intercept = my - rate * mx;
    let ss_res: T = xs.iter().zip(&ys).map(|(x, y)| (*y - intercept - rate * *x).powi(2)).sum();
    let tiny = lit::<T>(1e-24) * (T::one() + my * my) * n;
    let r_squared = if syy <= tiny { T::one() } else { (T::one() - ss_res / syy).max(T::zero()).min(T::one()) };
    Ok(DecayFit { rate, intercept, r_squared })
}

/// How the constant of an envelope check is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Calibration {
    /// From the first point only, then frozen.
    First,
    /// Maximum over all points (the check then reduces to where the maximum is attained).
    Max,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeCheck<T> {
    pub constant: T,
    /// measured / (C · shape) per point.
    pub ratios: Vec<T>,
    pub holds: bool,
    /// j at which measured/shape is largest.
    pub attained_at: i32,
}

/// Checks measured(j) ≤ C · shape(j) with C calibrated per `calibration`.
pub fn envelope_check<T: Real, S: Fn(i32) -> T>(points: &[(i32, T)], shape: S, calibration: Calibration) -> Result<EnvelopeCheck<T>> {
    if points.is_empty() {
        return Err(Error::InvalidInput("envelope check needs at least one point".into()));
    }
    let raw: Vec<T> = points.iter().map(|&(j, v)| v / shape(j)).collect();
    let (mut best, mut attained_at) = (raw[0], points[0].0);
    for (r, p) in raw.iter().zip(points) {
        if *r > best {
            best = *r;
            attained_at = p.0;
        }
    }
    let constant = match calibration {
        Calibration::First => raw[0],
        Calibration::Max => best,
    };
    let ratios: Vec<T> = raw.iter().map(|r| *r / constant).collect();
    let slack = T::one() + lit::<T>(1e-12);
    let holds = ratios.iter().all(|r| *r <= slack);
    Ok(EnvelopeCheck { constant, ratios, holds, attained_at })
}

/// 2^{−j/200}.
pub fn part1_shape<T: Real>(j: i32) -> T {
    pow2(lit::<T>(-(j as f64) / 200.0))
}

/// 2^{−j/200} + 2^{(1/2)(7k/3 − 399j/300)}.
pub fn part2_shape<T: Real>(k: i32, j: i32) -> T {
    let (k, j) = (k as f64, j as f64);
    pow2(lit::<T>(-j / 200.0)) + pow2(lit::<T>(0.5 * (7.0 * k / 3.0 - 399.0 * j / 300.0)))
}

/// Right-hand side shape used for the lemma envelopes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LemmaShape {
    /// Indicator term plus decay term, as displayed.
    Display,
    /// Decay term only: 2^{−j/9} (Part 1) or 2^{(7/3)k − (399/300)j} (Part 2).
    DecayOnly,
}

/// Parameters of one lemma sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaSweep<T> {
    pub variant: PhaseVariant,
    pub j_range: RangeInclusive<i32>,
    /// Only used for Part 2.
    pub k: i32,
    /// b(x) entering the offsets; by = bx √h.
    pub bx: T,
    pub h_set: Vec<T>,
    pub xi_set: Vec<T>,
    pub v_set: Vec<T>,
    pub shape: LemmaShape,
    pub tol: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaRow<T> {
    pub j: i32,
    pub xi_prime: T,
    pub h: T,
    /// Linear coefficient attaining the measured maximum.
    pub v_star: T,
    pub measured: T,
    pub psi_c2: T,
    pub normalized: T,
    pub shape: T,
    pub envelope: T,
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaEnvelope<T> {
    pub rows: Vec<LemmaRow<T>>,
    pub constant: T,
    pub calibration_j: i32,
    /// Every row lies within the single calibrated envelope, whatever its h.
    pub h_uniform: bool,
}

impl<T: Real> LemmaSweep<T> {
    fn by(&self, h: T) -> T {
        self.bx * h.sqrt()
    }

    /// Support of s ↦ Ψ(ξ′, s) intersected over both cutoffs, or None.
    fn support(&self, h: T, xi: T) -> Option<(T, T)> {
        let (ax, ay) = self.cutoff_scales(h);
        let lo = (ax * lit(0.5)).max((ay * lit(0.5) + xi) / h);
        let hi = (ax * lit(2.0)).min((ay * lit(2.0) + xi) / h);
        (lo < hi).then_some((lo, hi))
    }

    /// Centres of the two cutoffs in s and hs − ξ′.
    fn cutoff_scales(&self, h: T) -> (T, T) {
        match self.variant {
            PhaseVariant::Part2 => (self.bx * self.bx, self.by(h) * self.by(h)),
            _ => (T::one(), T::one()),
        }
    }

    /// Ψ(ξ′, s) = ψ₀(s/a_x)/s · ψ₀((hs − ξ′)/a_y)/(hs − ξ′).
    fn psi(&self, h: T, xi: T, s: T) -> T {
        let (ax, ay) = self.cutoff_scales(h);
        let u = h * s - xi;
        let a = bump_psi0(s / ax);
        if a == T::zero() {
            return T::zero();
        }
        let b = bump_psi0(u / ay);
        if b == T::zero() {
            return T::zero();
        }
        a / s * b / u
    }

    /// sup over ξ′ ∈ [−L, L] of sup|Ψ| + sup|Ψ′| + sup|Ψ″| in s, by finite differences.
    pub fn psi_c2(&self, h: T) -> T {
        let reach = match self.variant {
            PhaseVariant::Part2 => lit::<T>(4.0),
            _ => lit::<T>(2.0),
        };
        let (ax, _) = self.cutoff_scales(h);
        let (lo, hi) = (ax * lit(0.5), ax * lit(2.0));
        let ns = 2001;
        let nxi = 401;
        let ds = (hi - lo) / from_usize::<T>(ns - 1);
        (0..nxi)
            .into_par_iter()
            .map(|m| {
                let xi = -reach + lit::<T>(2.0) * reach * from_usize::<T>(m) / from_usize::<T>(nxi - 1);
                let vals: Vec<T> = (0..ns).map(|i| self.psi(h, xi, lo + ds * from_usize::<T>(i))).collect();
                let s0 = vals.iter().fold(T::zero(), |a, v| a.max(v.abs()));
                let s1 = vals.windows(2).fold(T::zero(), |a, w| a.max(((w[1] - w[0]) / ds).abs()));
                let s2 = vals
                    .windows(3)
                    .fold(T::zero(), |a, w| a.max(((w[2] - w[1] - w[1] + w[0]) / (ds * ds)).abs()));
                s0 + s1 + s2
            })
            .reduce(T::zero, T::max)
    }

    fn decay_term(&self, j: i32) -> T {
        let jf = j as f64;
        match self.variant {
            PhaseVariant::Part2 => pow2(lit::<T>(7.0 * self.k as f64 / 3.0 - 399.0 * jf / 300.0)),
            _ => pow2(lit::<T>(-jf / 9.0)),
        }
    }

    fn shape_at(&self, j: i32, xi: T) -> T {
        let decay = if xi.abs() <= lit(4.0) { self.decay_term(j) } else { T::zero() };
        match self.shape {
            LemmaShape::DecayOnly => decay,
            LemmaShape::Display => {
                let ind = if xi.abs() <= pow2(lit::<T>(-(j as f64) / 100.0)) { T::one() } else { T::zero() };
                ind + decay
            }
        }
    }

    /// max over v of |∫ e^{ivs} e^{iR(s)} Ψ(ξ′, s) ds|.
    fn measure(&self, j: i32, h: T, xi: T) -> Result<(T, T)> {
        let Some((lo, hi)) = self.support(h, xi) else {
            return Ok((T::zero(), self.v_set.first().copied().unwrap_or(T::zero())));
        };
        let mut best = (-T::one(), T::zero());
        for &v in &self.v_set {
            let phase = PhaseSpec::from_h(self.variant, v, j, self.k, self.bx, h, xi)?;
            let amp = |s: T| Complex::new(self.psi(h, xi, s), T::zero());
            let r = integrate_oscillatory(amp, phase, Interval::new(lo, hi)?, self.tol)?;
            if r.value.norm() > best.0 {
                best = (r.value.norm(), v);
            }
        }
        Ok(best)
    }
}

/// Sweeps the lemma integral over (j, ξ′, h), normalizes by ‖Ψ‖_{C²} and checks a single envelope
/// C · shape(j, ξ′) with C calibrated on the rows at the smallest j.
pub fn oscillatory_lemma_envelope<T: Real>(sweep: &LemmaSweep<T>) -> Result<LemmaEnvelope<T>> {
    if sweep.j_range.is_empty() || sweep.h_set.is_empty() || sweep.xi_set.is_empty() || sweep.v_set.is_empty() {
        return Err(Error::InvalidInput("lemma sweep needs non-empty j, h, ξ′ and v sets".into()));
    }
    if sweep.variant == PhaseVariant::Part2 {
        let lo = (11 * sweep.k + 5).div_euclid(6);
        if *sweep.j_range.start() < lo || *sweep.j_range.end() > 2 * sweep.k {
            return Err(Error::InvalidInput(format!("Part 2 lemma needs j ∈ [{lo}, {}]", 2 * sweep.k)));
        }
    }
    let c2: Vec<T> = sweep.h_set.iter().map(|&h| sweep.psi_c2(h)).collect();
    let mut tuples = Vec::new();
    for j in sweep.j_range.clone() {
        for (hi, &h) in sweep.h_set.iter().enumerate() {
            for &xi in &sweep.xi_set {
                tuples.push((j, hi, h, xi));
            }
        }
    }
    let measured: Vec<(T, T)> = tuples
        .par_iter()
        .map(|&(j, _, h, xi)| sweep.measure(j, h, xi))
        .collect::<Result<_>>()?;
    let calibration_j = *sweep.j_range.start();
    let mut constant = T::zero();
    for (&(j, hi, _, xi), &(m, _)) in tuples.iter().zip(&measured) {
        let shape = sweep.shape_at(j, xi);
        if j == calibration_j && shape > T::zero() {
            constant = constant.max(m / c2[hi] / shape);
        }
    }
    let slack = T::one() + lit::<T>(1e-9);
    let rows: Vec<LemmaRow<T>> = tuples
        .iter()
        .zip(&measured)
        .map(|(&(j, hi, h, xi), &(m, v))| {
            let shape = sweep.shape_at(j, xi);
            let normalized = m / c2[hi];
            let envelope = constant * shape;
            LemmaRow {
                j,
                xi_prime: xi,
                h,
                v_star: v,
                measured: m,
                psi_c2: c2[hi],
                normalized,
                shape,
                envelope,
                within: normalized <= envelope * slack,
            }
        })
        .collect();
    let h_uniform = rows.iter().all(|r| r.within);
    Ok(LemmaEnvelope { rows, constant, calibration_j, h_uniform })
}
