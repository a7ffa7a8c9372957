use nalgebra::DMatrix;
use num_complex::Complex64;
use pcarleson::kernels::*;
use pcarleson::linalg::Mat;
use pcarleson::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(20_240_601)
}

#[test]
fn split_identity_on_reference_point_and_random_corpus() {
    let lhs = kernel_k1(1.3, 2.7, 5.0).unwrap() + kernel_k2(1.3, 2.7, 5.0).unwrap();
    assert!((lhs - kernel_split_rhs(1.3, 2.7, 5.0).unwrap()).norm() <= 1e-12);
    let mut r = rng();
    for _ in 0..1000 {
        let a: f64 = r.gen_range(0.05..5.0);
        let b: f64 = r.gen_range(-20.0..20.0);
        let mut s: f64 = r.gen_range(1e-3..50.0);
        if (s - a * a).abs() < 1e-3 {
            s += 0.01;
        }
        let lhs = kernel_k1(a, b, s).unwrap() + kernel_k2(a, b, s).unwrap();
        let rhs = kernel_split_rhs(a, b, s).unwrap();
        assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0), "(a,b,s) = ({a},{b},{s})");
    }
}

#[test]
fn k2_singular_at_a_squared() {
    assert!(matches!(kernel_k2(2.0, 1.0, 4.0), Err(Error::SingularPoint { .. })));
}

#[test]
fn small_a_limit() {
    let (b, s) = (1.7f64, 2.3f64);
    let k2 = kernel_k2(1e-12, b, s).unwrap();
    assert!(k2.norm() < 1e-11);
    let k1 = kernel_k1(1e-12, b, s).unwrap();
    let limit = (Complex64::from_polar(1.0, b * s.sqrt()) - Complex64::from_polar(1.0, -b * s.sqrt())) / (2.0 * s);
    assert!((k1 - limit).norm() < 1e-11);
}

#[test]
fn k1_bound_on_inner_interval() {
    let mut r = rng();
    for _ in 0..100 {
        let a: f64 = r.gen_range(0.1..4.0);
        let s: f64 = r.gen_range(1e-6..1.0) * a * a;
        // Literal bound: needs |b| ≤ 1.
        let b: f64 = r.gen_range(-1.0..1.0);
        let k = kernel_k1(a, b, s).unwrap().norm();
        assert!(k <= 1f64.min(s.powf(-0.5)) / (s.sqrt() + a) * (1.0 + 1e-12));
        // General form with |b| in place of 1.
        let b: f64 = r.gen_range(-30.0..30.0);
        let k = kernel_k1(a, b, s).unwrap().norm();
        assert!(k <= b.abs().min(s.powf(-0.5)) / (s.sqrt() + a) * (1.0 + 1e-12));
    }
}

#[test]
fn comparison_integral_values() {
    let middle = ((1.5f64.sqrt() + 1.0) / (0.5f64.sqrt() + 1.0)).ln();
    let tail = ((1.5f64.sqrt() + 1.0) / (1.5f64.sqrt() - 1.0)).ln();
    for &a in &[0.1, 1.0, 10.0] {
        let c = comparison_integrals(a, 1e-12).unwrap();
        assert!((c.middle.value.re - middle).abs() < 1e-8);
        assert!((c.tail.value.re - tail).abs() < 1e-6);
        assert!(c.tail.value.re < 10.0 && c.far_tail.value.re < 10.0);
        assert!((c.far_tail.value.re - 2.0 * 2f64.ln()).abs() < 1e-8);
    }
}

#[test]
fn bump_support_and_partition() {
    assert_eq!(bump_psi0(0.4), 0.0);
    assert_eq!(bump_psi0(2.1), 0.0);
    assert!(bump_psi0(1.0) > 0.0);
    assert!(bump_partition_defect(1.0) <= 1e-12);
    let mut r = rng();
    for _ in 0..1000 {
        let xi = 10f64.powf(r.gen_range(-6.0..6.0));
        assert!(bump_partition_defect(xi) <= 1e-12, "ξ = {xi}");
    }
}

#[test]
fn h_majorizer_dominates() {
    assert_eq!(h_value(0.0, SqrtBranch::Abs), 0.0);
    assert_eq!(h_majorizer(0.0), 0.0);
    assert_eq!(h_value(-1.0, SqrtBranch::Abs), 1.0);
    assert_eq!(h_majorizer(-1.0), 4.0);
    let mut r = rng();
    for _ in 0..10_000 {
        let t: f64 = r.gen_range(-1e4..1e4);
        for br in [SqrtBranch::Abs, SqrtBranch::Signed] {
            assert!(h_value(t, br) <= h_majorizer(t), "t = {t}");
        }
    }
}

fn random_phase(r: &mut ChaCha8Rng) -> (PhaseSpec<f64>, f64) {
    let variant = [PhaseVariant::Part1, PhaseVariant::Part2, PhaseVariant::Outer][r.gen_range(0..3)];
    let j = r.gen_range(0..24);
    let k = if variant == PhaseVariant::Part2 { r.gen_range(1..12) } else { 0 };
    let bx: f64 = r.gen_range(1.0..2.0);
    let h: f64 = r.gen_range(0.05..1.0);
    let v: f64 = r.gen_range(-5.0..5.0);
    let s: f64 = r.gen_range(0.25..4.0);
    let probe = PhaseSpec::from_h(variant, v, j, k, bx, h, 0.0).unwrap();
    let (_, y0) = probe.radicands(s);
    let xi: f64 = r.gen_range(-2.0..(y0 - 0.25).min(2.0));
    (PhaseSpec::from_h(variant, v, j, k, bx, h, xi).unwrap(), s)
}

#[test]
fn phase_derivatives_match_finite_differences() {
    let mut r = rng();
    for _ in 0..100 {
        let (p, s) = random_phase(&mut r);
        let e = 1e-3;
        let f = |u: f64| p.eval(u).unwrap();
        let d2_fd = (-f(s + 2.0 * e) + 16.0 * f(s + e) - 30.0 * f(s) + 16.0 * f(s - e) - f(s - 2.0 * e)) / (12.0 * e * e);
        let d1 = |u: f64| p.d1(u).unwrap();
        let d2 = |u: f64| p.d2(u).unwrap();
        let d3_fd = (-d2(s + 2.0 * e) + 8.0 * d2(s + e) - 8.0 * d2(s - e) + d2(s - 2.0 * e)) / (12.0 * e);
        let d2_from_d1 = (-d1(s + 2.0 * e) + 8.0 * d1(s + e) - 8.0 * d1(s - e) + d1(s - 2.0 * e)) / (12.0 * e);
        let scale = p.amplitude();
        assert!((p.d2(s).unwrap() - d2_from_d1).abs() <= 1e-6 * scale);
        assert!((p.d2(s).unwrap() - d2_fd).abs() <= 1e-4 * scale);
        assert!((p.d3(s).unwrap() - d3_fd).abs() <= 1e-6 * scale);
    }
}

#[test]
fn linear_coefficient_leaves_higher_derivatives_unchanged() {
    let a = PhaseSpec::new(PhaseVariant::Part1, 0.0, 5, 0, 1.0, 0.8, 0.3).unwrap();
    let b = PhaseSpec::new(PhaseVariant::Part1, 7.5, 5, 0, 1.0, 0.8, 0.3).unwrap();
    assert_eq!(a.d2(1.1).unwrap(), b.d2(1.1).unwrap());
    assert_eq!(a.d3(1.1).unwrap(), b.d3(1.1).unwrap());
}

#[test]
fn degenerate_phases_vanish() {
    let p = PhaseSpec::new(PhaseVariant::Part2, 0.0, 11, 6, 1.5, 1.5, 0.0).unwrap();
    assert_eq!(p.d2(1.0).unwrap(), 0.0);
    assert_eq!(p.d3(1.0).unwrap(), 0.0);
    let q = PhaseSpec::new(PhaseVariant::Part1, 0.0, 0, 0, 1.0, 1.0, 0.0).unwrap();
    assert_eq!(q_vector(&q, 1.0).unwrap(), (0.0, 0.0));
    let bad = PhaseSpec::new(PhaseVariant::Part1, 0.0, 3, 0, 1.0, 1.0, 3.0).unwrap();
    assert!(matches!(bad.eval(1.0), Err(Error::DomainError { .. })));
}

#[test]
fn q_factorization_holds() {
    let mut r = rng();
    for _ in 0..100 {
        let (p, s) = random_phase(&mut r);
        let d = q_factorization_defect(&p, s).unwrap();
        let (q0, q1) = q_vector(&p, s).unwrap();
        assert!(d <= 1e-10 * (q0.hypot(q1)).max(1.0), "defect {d:e}");
    }
}

#[test]
fn q_lower_bound_constant_is_positive() {
    let js: Vec<i32> = (10..=30).collect();
    let c: f64 = q_lower_bound_constant(&js, &[0.1, 0.5, 1.0], 201).unwrap();
    assert!(c > 0.0 && c.is_finite());
}

fn svd_norm(a: &Mat<f64>) -> f64 {
    DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice()).singular_values().max()
}

#[test]
fn matrix_lemma_equality_cases() {
    let (l, r) = matrix_lower_bound_check(&Mat::<f64>::identity(3), &[0.3, -0.4, 1.2]).unwrap();
    assert!((l - r).abs() < 1e-14);
    let d = Mat::<f64>::from_row_major(2, 2, vec![2.0, 0.0, 0.0, 0.5]).unwrap();
    let (l, r) = matrix_lower_bound_check(&d, &[0.0, 1.0]).unwrap();
    assert!((l - 0.5).abs() < 1e-15 && (r - 0.5).abs() < 1e-15);
    let singular = Mat::from_row_major(2, 2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
    assert!(matches!(matrix_lower_bound_check(&singular, &[1.0, 0.0]), Err(Error::SingularMatrix { .. })));
}

#[test]
fn matrix_lemma_random_corpus() {
    let mut r = rng();
    for (n, count) in [(2usize, 10_000usize), (3, 1_000)] {
        let mut checked = 0;
        while checked < count {
            let a = Mat::from_row_major(n, n, (0..n * n).map(|_| r.gen_range(-1.0..1.0)).collect()).unwrap();
            let mut x: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
            let xn = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= xn);
            let (l, rhs) = match matrix_lower_bound_check(&a, &x) {
                Ok(v) => v,
                Err(Error::SingularMatrix { .. }) => continue,
                Err(e) => panic!("{e}"),
            };
            assert!((a.spectral_norm() - svd_norm(&a)).abs() <= 1e-12 * svd_norm(&a));
            assert!(l >= rhs * (1.0 - 1e-10), "n = {n}: {l} < {rhs}");
            checked += 1;
        }
    }
}

#[test]
fn taylor_polynomials() {
    for src in [TaylorSource::PaperCoeffs, TaylorSource::TrueTaylor] {
        let p = taylor_p5(3.0, src).unwrap();
        assert_eq!(p.eval(0.0), 3.0);
        assert_eq!(p.coeffs[0], 3.0);
    }
    // Derivatives of √(1+t) at 0 divided by m!, from the binomial series.
    let p = taylor_p5(1.0f64, TaylorSource::TrueTaylor).unwrap();
    let mut c = 1.0f64;
    for m in 0..6 {
        assert!((p.coeffs[m] - c).abs() < 1e-15);
        c *= (0.5 - m as f64) / (m as f64 + 1.0);
    }
    let r1: f64 = remainder_ratio(1.0, TaylorSource::TrueTaylor).unwrap();
    for b in [10.0, 100.0] {
        let rb: f64 = remainder_ratio(b, TaylorSource::TrueTaylor).unwrap();
        assert!((rb - r1).abs() <= 1e-12 * r1);
    }
    assert!(r1.is_finite() && r1 < 1.0);
    let paper = remainder_ratio(1.0, TaylorSource::PaperCoeffs).unwrap();
    assert!(paper > r1);
}
