use num_complex::Complex;
use rustfft::FftPlanner;

use crate::scalar::{cis, czero, lit, Real};

/// X_k = Σ_{ℓ < L} c_ℓ e^{iθkℓ} for k < `count`, by Bluestein's convolution.
pub(crate) fn chirp_z<T: Real>(c: &[Complex<T>], theta: T, count: usize, planner: &mut FftPlanner<T>) -> Vec<Complex<T>> {
    let l = c.len();
    if l == 0 || count == 0 {
        return vec![czero(); count];
    }
    let size = (l + count - 1).next_power_of_two();
    let half = lit::<T>(0.5);
    let chirp = |n: i64| cis(theta * half * lit::<T>((n * n) as f64));
    let mut a = vec![czero(); size];
    for (i, v) in c.iter().enumerate() {
        a[i] = *v * chirp(i as i64);
    }
    let mut b = vec![czero(); size];
    for n in 0..count {
        b[n] = chirp(n as i64).conj();
    }
    for n in 1..l {
        b[size - n] = chirp(n as i64).conj();
    }
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= *y;
    }
    inv.process(&mut a);
    let scale = T::one() / lit::<T>(size as f64);
    (0..count).map(|k| a[k] * scale * chirp(k as i64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chirp_matches_direct_sum() {
        let c: Vec<Complex<f64>> = (0..37).map(|i| Complex::new((i as f64 * 0.3).sin(), (i as f64).cos())).collect();
        let theta = 0.0123;
        let mut planner = FftPlanner::new();
        let x = chirp_z(&c, theta, 11, &mut planner);
        for (k, xk) in x.iter().enumerate() {
            let direct = c
                .iter()
                .enumerate()
                .fold(czero::<f64>(), |acc, (l, v)| acc + *v * cis(theta * (k * l) as f64));
            assert!((direct - xk).norm() < 1e-12);
        }
    }
}
