//! Bounded-variable revised simplex for max cᵀx, A x = rhs, l ≤ x ≤ u with few rows.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{lit, Real};

const REFACTOR_EVERY: usize = 40;

#[derive(Debug, Clone)]
pub(crate) struct BoundedLp<T> {
    /// Row-major m × n constraint matrix.
    pub a: Mat<T>,
    pub rhs: Vec<T>,
    pub cost: Vec<T>,
    pub lower: Vec<T>,
    pub upper: Vec<T>,
}

#[derive(Debug, Clone)]
pub(crate) struct LpSolution<T> {
    /// Equality duals y = c_Bᵀ B⁻¹ of the optimal basis.
    pub duals: Vec<T>,
    pub objective: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Status {
    Lower,
    Upper,
    Basic,
}

struct State<T> {
    m: usize,
    cols: Vec<Vec<T>>,
    lower: Vec<T>,
    upper: Vec<T>,
    x: Vec<T>,
    status: Vec<Status>,
    basis: Vec<usize>,
    binv: Mat<T>,
}

impl<T: Real> State<T> {
    fn refactor(&mut self) -> Result<()> {
        let mut b = Mat::zeros(self.m, self.m);
        for (k, &j) in self.basis.iter().enumerate() {
            for i in 0..self.m {
                b[(i, k)] = self.cols[j][i];
            }
        }
        self.binv = b.inverse()?;
        Ok(())
    }

    fn ftran(&self, col: &[T]) -> Vec<T> {
        self.binv.mul_vec(col)
    }

    /// Recomputes basic values from the nonbasic ones.
    fn recompute_basics(&mut self, rhs: &[T]) {
        let mut r = rhs.to_vec();
        for (j, col) in self.cols.iter().enumerate() {
            if self.status[j] != Status::Basic {
                for i in 0..self.m {
                    r[i] -= col[i] * self.x[j];
                }
            }
        }
        let xb = self.ftran(&r);
        for (k, &j) in self.basis.iter().enumerate() {
            self.x[j] = xb[k];
        }
    }

    fn duals(&self, cost: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.m];
        for (k, &j) in self.basis.iter().enumerate() {
            for i in 0..self.m {
                y[i] += cost[j] * self.binv[(k, i)];
            }
        }
        y
    }

    /// Runs simplex iterations for the given cost until optimal.
    fn optimize(&mut self, cost: &[T], rhs: &[T], max_iter: usize, iterations: &mut usize) -> Result<()> {
        let tol = lit::<T>(1e-11);
        let mut since_refactor = 0;
        let mut degenerate_run = 0usize;
        loop {
            if *iterations >= max_iter {
                return Err(Error::LpNotConverged(*iterations));
            }
            let y = self.duals(cost);
            let scale = y.iter().fold(T::one(), |m, v| m.max(v.abs()));
            let bland = degenerate_run > 50;
            let mut entering: Option<(usize, T, T)> = None;
            for j in 0..self.cols.len() {
                let st = self.status[j];
                if st == Status::Basic || self.upper[j] == self.lower[j] {
                    continue;
                }
                let d = cost[j] - self.cols[j].iter().zip(&y).fold(T::zero(), |s, (a, yi)| s + *a * *yi);
                let dir = match st {
                    Status::Lower if d > tol * scale => T::one(),
                    Status::Upper if d < -tol * scale => -T::one(),
                    _ => continue,
                };
                let better = match entering {
                    None => true,
                    Some((_, dbest, _)) => !bland && d.abs() > dbest.abs(),
                };
                if better {
                    entering = Some((j, d, dir));
                }
                if bland && entering.is_some() {
                    break;
                }
            }
            let Some((q, _, dir)) = entering else {
                return Ok(());
            };
            let alpha = self.ftran(&self.cols[q]);
            // x_B(θ) = x_B − θ dir α.
            let mut theta = self.upper[q] - self.lower[q];
            let mut leave: Option<(usize, Status)> = None;
            let piv_tol = lit::<T>(1e-10);
            for (k, &j) in self.basis.iter().enumerate() {
                let rate = dir * alpha[k];
                if rate > piv_tol {
                    let room = ((self.x[j] - self.lower[j]) / rate).max(T::zero());
                    if room < theta || (room == theta && leave.is_some_and(|(kk, _)| bland && self.basis[kk] > j)) {
                        theta = room;
                        leave = Some((k, Status::Lower));
                    }
                } else if rate < -piv_tol && self.upper[j].is_finite() {
                    let room = ((self.upper[j] - self.x[j]) / (-rate)).max(T::zero());
                    if room < theta || (room == theta && leave.is_some_and(|(kk, _)| bland && self.basis[kk] > j)) {
                        theta = room;
                        leave = Some((k, Status::Upper));
                    }
                }
            }
            if !theta.is_finite() {
                return Err(Error::LpNotConverged(*iterations));
            }
            degenerate_run = if theta <= tol { degenerate_run + 1 } else { 0 };
            self.x[q] += dir * theta;
            for (k, &j) in self.basis.iter().enumerate() {
                self.x[j] -= dir * theta * alpha[k];
            }
            match leave {
                None => {
                    self.status[q] = if dir > T::zero() { Status::Upper } else { Status::Lower };
                    self.x[q] = if dir > T::zero() { self.upper[q] } else { self.lower[q] };
                }
                Some((r, st)) => {
                    let out = self.basis[r];
                    self.status[out] = st;
                    self.x[out] = if st == Status::Lower { self.lower[out] } else { self.upper[out] };
                    self.status[q] = Status::Basic;
                    self.basis[r] = q;
                    let piv = alpha[r];
                    for c in 0..self.m {
                        self.binv[(r, c)] /= piv;
                    }
                    for k in 0..self.m {
                        if k != r && alpha[k] != T::zero() {
                            let f = alpha[k];
                            for c in 0..self.m {
                                let v = self.binv[(r, c)];
                                self.binv[(k, c)] -= f * v;
                            }
                        }
                    }
                    since_refactor += 1;
                    if since_refactor >= REFACTOR_EVERY {
                        self.refactor()?;
                        self.recompute_basics(rhs);
                        since_refactor = 0;
                    }
                }
            }
            *iterations += 1;
        }
    }
}

/// Two-phase solve; artificials are fixed at zero in phase 2.
pub(crate) fn solve<T: Real>(lp: &BoundedLp<T>, max_iter: usize) -> Result<LpSolution<T>> {
    let m = lp.a.rows();
    let n = lp.a.cols();
    let mut cols: Vec<Vec<T>> = (0..n).map(|j| (0..m).map(|i| lp.a[(i, j)]).collect()).collect();
    let mut x: Vec<T> = lp.lower.clone();
    let mut residual = lp.rhs.clone();
    for (j, col) in cols.iter().enumerate() {
        for i in 0..m {
            residual[i] -= col[i] * x[j];
        }
    }
    let mut lower = lp.lower.clone();
    let mut upper = lp.upper.clone();
    let mut status = vec![Status::Lower; n];
    let mut basis = Vec::with_capacity(m);
    for (i, r) in residual.iter().enumerate() {
        let mut col = vec![T::zero(); m];
        col[i] = if *r >= T::zero() { T::one() } else { -T::one() };
        cols.push(col);
        lower.push(T::zero());
        upper.push(T::infinity());
        x.push(r.abs());
        status.push(Status::Basic);
        basis.push(n + i);
    }
    let mut st = State { m, cols, lower, upper, x, status, basis, binv: Mat::identity(m) };
    st.refactor()?;
    let mut iterations = 0;
    let phase1: Vec<T> = (0..n + m).map(|j| if j >= n { -T::one() } else { T::zero() }).collect();
    st.optimize(&phase1, &lp.rhs, max_iter, &mut iterations)?;
    let infeas: T = (n..n + m).map(|j| st.x[j]).sum();
    let rhs_scale = lp.rhs.iter().fold(T::one(), |a, v| a.max(v.abs()));
    if infeas > lit::<T>(1e-9) * rhs_scale {
        return Err(Error::LpInfeasible);
    }
    for j in n..n + m {
        st.upper[j] = T::zero();
        st.x[j] = T::zero();
    }
    st.refactor()?;
    st.recompute_basics(&lp.rhs);
    let mut cost = lp.cost.clone();
    cost.extend(std::iter::repeat(T::zero()).take(m));
    st.optimize(&cost, &lp.rhs, max_iter, &mut iterations)?;
    st.refactor()?;
    st.recompute_basics(&lp.rhs);
    let duals = st.duals(&cost);
    let objective = st.x[..n].iter().zip(&lp.cost).map(|(a, c)| *a * *c).sum();
    Ok(LpSolution { duals, objective })
}
