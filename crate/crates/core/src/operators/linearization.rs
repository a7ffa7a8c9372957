use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::truncated::MaxModResult;
use crate::error::{Error, Result};
use crate::scalar::{to_f64, Real};

/// Piecewise-constant choice x ↦ (N(x), b(x)) on the output grid, with an activity mask used to
/// split the operator by the size of b(x).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearizationChoice<T> {
    n: Vec<T>,
    b: Vec<T>,
    active: Vec<bool>,
}

impl<T: Real> LinearizationChoice<T> {
    pub fn from_arrays(n: Vec<T>, b: Vec<T>) -> Result<Self> {
        if n.len() != b.len() {
            return Err(Error::InvalidInput(format!("N has {} entries but b has {}", n.len(), b.len())));
        }
        if let Some(bad) = b.iter().find(|v| !(**v > T::zero() && v.is_finite())) {
            return Err(Error::InvalidInput(format!("b must be positive and finite, got {}", to_f64(*bad))));
        }
        if let Some(bad) = n.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("N must be finite, got {}", to_f64(*bad))));
        }
        let active = vec![true; n.len()];
        Ok(Self { n, b, active })
    }

    pub fn constant(len: usize, n: T, b: T) -> Result<Self> {
        Self::from_arrays(vec![n; len], vec![b; len])
    }

    /// Greedy maximizer of a [`MaxModResult`] evaluated at every grid node.
    pub fn from_max_modulation(result: &MaxModResult<T>) -> Result<Self> {
        Self::from_arrays(result.argmax_n.clone(), result.argmax_b.clone())
    }

    /// Seeded draws from finite value sets, constant on consecutive runs of `piece_len` nodes.
    pub fn random(len: usize, n_values: &[T], b_values: &[T], piece_len: usize, seed: u64) -> Result<Self> {
        if n_values.is_empty() || b_values.is_empty() || piece_len == 0 {
            return Err(Error::InvalidInput("random linearization needs value sets and piece_len > 0".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut n = Vec::with_capacity(len);
        let mut b = Vec::with_capacity(len);
        while n.len() < len {
            let nv = *n_values.choose(&mut rng).expect("non-empty");
            let bv = *b_values.choose(&mut rng).expect("non-empty");
            let run = piece_len.min(len - n.len());
            n.extend(std::iter::repeat(nv).take(run));
            b.extend(std::iter::repeat(bv).take(run));
        }
        Self::from_arrays(n, b)
    }

    /// Keeps only rows whose b satisfies `keep`; the others contribute zero.
    pub fn filtered<P: Fn(T) -> bool>(&self, keep: P) -> Self {
        let active = self.active.iter().zip(&self.b).map(|(a, b)| *a && keep(*b)).collect();
        Self { n: self.n.clone(), b: self.b.clone(), active }
    }

    /// Rows with b(x) ≤ threshold.
    pub fn small_b(&self, threshold: T) -> Self {
        self.filtered(|b| b <= threshold)
    }

    /// Rows with b(x) > threshold.
    pub fn large_b(&self, threshold: T) -> Self {
        self.filtered(|b| b > threshold)
    }

    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    pub fn n_at(&self, i: usize) -> T {
        self.n[i]
    }

    pub fn b_at(&self, i: usize) -> T {
        self.b[i]
    }

    pub fn is_active(&self, i: usize) -> bool {
        self.active[i]
    }

    /// Number of distinct (N, b) pairs among active rows.
    pub fn distinct_values(&self) -> usize {
        let mut pairs: Vec<(f64, f64)> = (0..self.len())
            .filter(|&i| self.active[i])
            .map(|i| (to_f64(self.n[i]), to_f64(self.b[i])))
            .collect();
        pairs.sort_by(|p, q| p.partial_cmp(q).unwrap());
        pairs.dedup();
        pairs.len()
    }
}
