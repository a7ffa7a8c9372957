use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::quadrature::Phase;
use crate::scalar::{from_usize, lit, to_f64, Real};

/// Which square-root phase of the decay lemmas is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseVariant {
    /// Offsets 2^{−j} b²; blocks 𝔖ʲ.
    Part1,
    /// Offsets 2^{2k−j} b_k²; blocks 𝔆ₖʲ.
    Part2,
    /// Offsets 2^{−j} b²; outer blocks 𝔗ʲ.
    Outer,
}

/// φ(s) = v s + 2^{j/2} (√(s + c_x) − √(h s − ξ′ + c_y)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpec<T> {
    pub linear_coeff: T,
    pub scale_j: i32,
    pub scale_k: i32,
    pub bx: T,
    pub by: T,
    pub xi_prime: T,
    pub h: T,
    pub variant: PhaseVariant,
}

impl<T: Real> PhaseSpec<T> {
    pub fn new(variant: PhaseVariant, v: T, j: i32, k: i32, bx: T, by: T, xi_prime: T) -> Result<Self> {
        if j < 0 || k < 0 {
            return Err(Error::InvalidInput(format!("scales must be non-negative, got j = {j}, k = {k}")));
        }
        if !(bx > T::zero() && by > T::zero() && by <= bx) {
            return Err(Error::InvalidInput(format!(
                "need 0 < by ≤ bx, got bx = {}, by = {}",
                to_f64(bx),
                to_f64(by)
            )));
        }
        let r = by / bx;
        Ok(Self { linear_coeff: v, scale_j: j, scale_k: k, bx, by, xi_prime, h: r * r, variant })
    }

    /// Builds the spec from bx and h, setting by = bx √h.
    pub fn from_h(variant: PhaseVariant, v: T, j: i32, k: i32, bx: T, h: T, xi_prime: T) -> Result<Self> {
        if !(h > T::zero() && h <= T::one()) {
            return Err(Error::InvalidInput(format!("h must lie in (0, 1], got {}", to_f64(h))));
        }
        let mut p = Self::new(variant, v, j, k, bx, bx * h.sqrt(), xi_prime)?;
        p.h = h;
        Ok(p)
    }

    /// 2^{j/2}.
    pub fn amplitude(&self) -> T {
        lit::<T>(2.0).powf(lit::<T>(self.scale_j as f64) / lit(2.0))
    }

    /// Offsets (c_x, c_y) added inside the two square roots.
    pub fn offsets(&self) -> (T, T) {
        let e = match self.variant {
            PhaseVariant::Part1 | PhaseVariant::Outer => -self.scale_j,
            PhaseVariant::Part2 => 2 * self.scale_k - self.scale_j,
        };
        let scale = lit::<T>(2.0).powi(e);
        (scale * self.bx * self.bx, scale * self.by * self.by)
    }

    /// Radicands X = s + c_x and Y = h s − ξ′ + c_y.
    pub fn radicands(&self, s: T) -> (T, T) {
        let (cx, cy) = self.offsets();
        (s + cx, self.h * s - self.xi_prime + cy)
    }

    fn checked(&self, s: T) -> Result<(T, T)> {
        let (x, y) = self.radicands(s);
        for r in [x, y] {
            if !(r > T::zero()) {
                return Err(Error::DomainError { at: to_f64(s), radicand: to_f64(r) });
            }
        }
        Ok((x, y))
    }

    /// Support in s where both radicands are positive, intersected with `[lo, hi]`.
    pub fn admissible(&self, s: T) -> bool {
        let (x, y) = self.radicands(s);
        x > T::zero() && y > T::zero()
    }

    pub fn eval(&self, s: T) -> Result<T> {
        let (x, y) = self.checked(s)?;
        Ok(self.linear_coeff * s + self.amplitude() * (x.sqrt() - y.sqrt()))
    }

    pub fn d1(&self, s: T) -> Result<T> {
        let (x, y) = self.checked(s)?;
        let half = lit::<T>(0.5);
        Ok(self.linear_coeff + self.amplitude() * half * (T::one() / x.sqrt() - self.h / y.sqrt()))
    }

    pub fn d2(&self, s: T) -> Result<T> {
        let (x, y) = self.checked(s)?;
        let q = lit::<T>(0.25);
        Ok(self.amplitude() * q * (-x.powf(lit(-1.5)) + self.h * self.h * y.powf(lit(-1.5))))
    }

    pub fn d3(&self, s: T) -> Result<T> {
        let (x, y) = self.checked(s)?;
        let c = lit::<T>(0.375);
        let h3 = self.h * self.h * self.h;
        Ok(self.amplitude() * c * (x.powf(lit(-2.5)) - h3 * y.powf(lit(-2.5))))
    }
}

impl<T: Real> Phase<T> for PhaseSpec<T> {
    fn value(&self, s: T) -> T {
        self.eval(s).unwrap_or_else(|_| T::nan())
    }
    fn derivative(&self, s: T) -> T {
        self.d1(s).unwrap_or_else(|_| T::nan())
    }
}

/// 𝒬(s) = (φ″(s), −(2/3) φ‴(s)).
pub fn q_vector<T: Real>(p: &PhaseSpec<T>, s: T) -> Result<(T, T)> {
    Ok((p.d2(s)?, -lit::<T>(2.0) / lit(3.0) * p.d3(s)?))
}

/// Factorization 𝒬 = (2^{j/2}/4) ℳ 𝒱 with ℳ = [[1, 1], [1/X, h/Y]] and
/// 𝒱 = (−X^{−3/2}, h² Y^{−3/2}); returns (prefactor, ℳ, 𝒱).
pub fn q_factorization<T: Real>(p: &PhaseSpec<T>, s: T) -> Result<(T, Mat<T>, [T; 2])> {
    let (x, y) = p.checked(s)?;
    let m = Mat::from_row_major(2, 2, vec![T::one(), T::one(), T::one() / x, p.h / y])?;
    let v = [-x.powf(lit(-1.5)), p.h * p.h * y.powf(lit(-1.5))];
    Ok((p.amplitude() / lit(4.0), m, v))
}

/// |𝒬(s) − (2^{j/2}/4) ℳ(s) 𝒱(s)|.
pub fn q_factorization_defect<T: Real>(p: &PhaseSpec<T>, s: T) -> Result<T> {
    let (q0, q1) = q_vector(p, s)?;
    let (c, m, v) = q_factorization(p, s)?;
    let mv = m.mul_vec(&v);
    let d0 = q0 - c * mv[0];
    let d1 = q1 - c * mv[1];
    Ok((d0 * d0 + d1 * d1).sqrt())
}

/// Smallest |𝒬(s)| / 2^{j/3} over Part 1 phases with |ξ′| ≥ 2^{−j/100}, s ∈ [1/2, 2] and
/// h s − ξ′ ∈ [1/2, 2] (the support of the lemma's amplitude), for the given j and h values.
pub fn q_lower_bound_constant<T: Real>(j_values: &[i32], h_values: &[T], samples: usize) -> Result<T> {
    let mut worst = T::infinity();
    for &j in j_values {
        let jf = lit::<T>(j as f64);
        let edge = lit::<T>(2.0).powf(-jf / lit(100.0));
        let xis = [edge, lit(0.5), T::one(), lit(2.0)];
        for &h in h_values {
            for &mag in &xis {
                for xi in [mag, -mag] {
                    let p = PhaseSpec::from_h(PhaseVariant::Part1, T::zero(), j, 0, T::one(), h, xi)?;
                    for i in 0..samples {
                        let s = lit::<T>(0.5) + lit::<T>(1.5) * from_usize::<T>(i) / from_usize::<T>(samples - 1);
                        let w = h * s - xi;
                        if w < lit(0.5) || w > lit(2.0) {
                            continue;
                        }
                        let (a, b) = q_vector(&p, s)?;
                        let ratio = (a * a + b * b).sqrt() / lit::<T>(2.0).powf(jf / lit(3.0));
                        worst = worst.min(ratio);
                    }
                }
            }
        }
    }
    Ok(worst)
}
