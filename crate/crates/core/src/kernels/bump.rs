use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Real};

/// Branch of `[u]^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SqrtBranch {
    /// `|u|^{1/2}`
    Abs,
    /// `sign(u)|u|^{1/2}`
    Signed,
}

impl SqrtBranch {
    pub fn apply<T: Real>(self, u: T) -> T {
        let r = u.abs().sqrt();
        match self {
            SqrtBranch::Abs => r,
            SqrtBranch::Signed if u < T::zero() => -r,
            SqrtBranch::Signed => r,
        }
    }
}

fn template<T: Real>(u: T) -> T {
    if u.abs() >= T::one() {
        T::zero()
    } else {
        (-T::one() / (T::one() - u * u)).exp()
    }
}

/// The dyadic bump ψ₀: smooth, supported in [1/2, 2], with Σ_j ψ₀(ξ/2ʲ) = 1 for ξ > 0.
///
/// With u = log₂ x and g(u) = exp(−1/(1−u²)), ψ₀(x) = g(u)/(g(u−1) + g(u) + g(u+1)); the
/// denominator is the 1-periodic sum of shifts of g, so the dyadic sum telescopes to 1.
pub fn bump_psi0<T: Real>(x: T) -> T {
    if !(x > lit(0.5) && x < lit(2.0)) {
        return T::zero();
    }
    let u = x.log2();
    let g = template(u);
    g / (template(u - T::one()) + g + template(u + T::one()))
}

/// |Σ_j ψ₀(ξ/2ʲ) − 1|, summing the (at most two) nonzero terms.
pub fn bump_partition_defect<T: Real>(xi: T) -> T {
    let j0 = xi.log2().floor().to_i32().unwrap_or(0);
    let sum: T = (j0 - 1..=j0 + 1).map(|j| bump_psi0(xi * lit::<T>(2.0).powi(-j))).sum();
    (sum - T::one()).abs()
}

/// h(t) = |[t+1]^{1/2} − 1|.
pub fn h_value<T: Real>(t: T, branch: SqrtBranch) -> T {
    (branch.apply(t + T::one()) - T::one()).abs()
}

/// Piecewise majorant of h: 4|t| on [−1/2, 2], 4 on [−2, −1/2), 4|t|^{1/2} for |t| ≥ 2.
pub fn h_majorizer<T: Real>(t: T) -> T {
    let four = lit::<T>(4.0);
    if t >= lit(-0.5) && t <= lit(2.0) {
        four * t.abs()
    } else if t >= lit(-2.0) && t < lit(-0.5) {
        four
    } else {
        four * t.abs().sqrt()
    }
}
