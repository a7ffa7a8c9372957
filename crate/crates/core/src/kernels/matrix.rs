use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{lit, to_f64, Real};

/// Returns (|A x|, |det A| ‖A‖^{1−n} |x|) with the spectral norm.
pub fn matrix_lower_bound_check<T: Real>(a: &Mat<T>, x: &[T]) -> Result<(T, T)> {
    let n = a.rows();
    if a.cols() != n || x.len() != n || n == 0 {
        return Err(Error::InvalidInput(format!(
            "need a square matrix and matching vector, got {}x{} and {}",
            a.rows(),
            a.cols(),
            x.len()
        )));
    }
    let norm = a.spectral_norm();
    let det = a.determinant();
    if norm == T::zero() || det.abs() <= lit::<T>(1e-14) * norm.powi(n as i32) {
        return Err(Error::SingularMatrix { det: to_f64(det) });
    }
    let ax = a.mul_vec(x);
    let lhs = ax.iter().map(|v| *v * *v).sum::<T>().sqrt();
    let xnorm = x.iter().map(|v| *v * *v).sum::<T>().sqrt();
    let rhs = det.abs() * norm.powi(1 - n as i32) * xnorm;
    Ok((lhs, rhs))
}
