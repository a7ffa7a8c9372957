use num_complex::Complex;

use super::sampled::SampledFunction;
use crate::scalar::{from_usize, Real};

/// Discrete centered Hardy–Littlewood maximal function:
/// Mf_i = max_r (2r+1)^{-1} Σ_{|m−i| ≤ r} |f_m|, samples outside the grid counted as zero.
pub fn discrete_hl_maximal<T: Real>(f: &SampledFunction<T>) -> SampledFunction<T> {
    let n = f.len();
    let mut prefix = vec![T::zero(); n + 1];
    for (i, v) in f.values().iter().enumerate() {
        prefix[i + 1] = prefix[i] + v.norm();
    }
    let window = |lo: i64, hi: i64| {
        let a = lo.max(0) as usize;
        let b = (hi.min(n as i64 - 1) + 1) as usize;
        prefix[b] - prefix[a]
    };
    let values = (0..n as i64)
        .map(|i| {
            let mut best = T::zero();
            for r in 0..n as i64 {
                let avg = window(i - r, i + r) / from_usize::<T>((2 * r + 1) as usize);
                best = best.max(avg);
            }
            Complex::new(best, T::zero())
        })
        .collect();
    f.with_values(values).expect("same grid")
}
