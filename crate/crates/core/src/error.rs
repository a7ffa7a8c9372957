use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("adaptive quadrature hit the subdivision limit ({limit}); estimate {estimate:e} > tol {tol:e}")]
    MaxSubdivisions { limit: usize, estimate: f64, tol: f64 },
    #[error("integrand returned a non-finite value at t = {at}")]
    NonFinite { at: f64 },
    #[error("principal-value pole at {at} lies on the interval boundary")]
    PoleOnBoundary { at: f64 },
    #[error("oscillatory tail did not converge: {0}")]
    TailNotConverged(String),
    #[error("kernel evaluated at its singular point s = {at}")]
    SingularPoint { at: f64 },
    #[error("square-root radicand not positive ({radicand}) at s = {at}")]
    DomainError { at: f64, radicand: f64 },
    #[error("matrix is numerically singular (|det| = {det:e})")]
    SingularMatrix { det: f64 },
    #[error("grid too coarse: {points_per_period:.2} points per oscillation period")]
    GridTooCoarse { points_per_period: f64 },
    #[error("power iteration did not converge in {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("non-positive norm {value} at j = {j}")]
    NonPositiveNorm { j: i32, value: f64 },
    #[error("decay fit needs at least 4 points, got {0}")]
    NeedAtLeast4Points(usize),
    #[error("linear program is infeasible")]
    LpInfeasible,
    #[error("linear program did not converge in {0} pivots")]
    LpNotConverged(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
