use nalgebra::DMatrix;
use num_complex::Complex64;
use pcarleson::kernels::{PhaseVariant, SqrtBranch};
use pcarleson::linalg::CMat;
use pcarleson::operators::{block_matrix, GridTemplate};
use pcarleson::spectral::{
    decay_curve, envelope_check, fit_decay, l2_norm_dense, l2_norm_matrix, l2_norm_power_iteration,
    oscillatory_lemma_envelope, part1_shape, part2_shape, Calibration, DecayFamily, DecaySetup, LemmaShape, LemmaSweep,
};
use pcarleson::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_cmat(n: usize, m: usize, seed: u64) -> CMat<f64> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..n * m).map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
    CMat::from_row_major(n, m, data).unwrap()
}

fn svd_norm(w: &CMat<f64>) -> f64 {
    DMatrix::from_row_slice(w.rows(), w.cols(), w.as_slice()).singular_values().max()
}

#[test]
fn power_iteration_matches_svd() {
    let w = random_cmat(128, 128, 11);
    let est = l2_norm_matrix(&w, 1e-10, 100_000).unwrap();
    let oracle = svd_norm(&w);
    assert!((est.value - oracle).abs() <= 1e-6 * oracle, "{} vs {oracle}", est.value);
    assert!(est.residual <= 1e-10 && est.iterations > 0);
    let small = random_cmat(24, 24, 12);
    assert!((l2_norm_dense(&small) - svd_norm(&small)).abs() <= 1e-10 * svd_norm(&small));
}

#[test]
fn rank_one_closed_form() {
    let u: Vec<Complex64> = (0..20).map(|i| Complex64::new(i as f64 * 0.1, 1.0)).collect();
    let v: Vec<Complex64> = (0..20).map(|i| Complex64::new(-0.5, (i as f64).sin())).collect();
    let data = u.iter().flat_map(|a| v.iter().map(move |b| a * b.conj())).collect();
    let w = CMat::from_row_major(20, 20, data).unwrap();
    let nu = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let est = l2_norm_matrix(&w, 1e-12, 1000).unwrap();
    assert!((est.value - nu * nv).abs() <= 1e-10 * nu * nv);
}

#[test]
fn zero_operator_and_bad_input() {
    let w = CMat::<f64>::zeros(10, 10);
    assert_eq!(l2_norm_matrix(&w, 1e-10, 10).unwrap().value, 0.0);
    assert!(matches!(l2_norm_matrix(&w, 0.0, 10), Err(Error::InvalidInput(_))));
    let hard = random_cmat(64, 64, 3);
    assert!(matches!(l2_norm_matrix(&hard, 1e-14, 2), Err(Error::NoConvergence { .. })));
}

#[test]
fn fit_recovers_synthetic_rate() {
    let pts: Vec<(i32, f64)> = (0..12).map(|j| (j, 3.0 * 2f64.powf(-j as f64 / 9.0))).collect();
    let fit = fit_decay(&pts).unwrap();
    assert!((fit.rate + 1.0 / 9.0).abs() <= 1e-9);
    assert!((fit.intercept - 3f64.log2()).abs() <= 1e-9);
    assert!((fit.r_squared - 1.0).abs() <= 1e-12);
    let flat: Vec<(i32, f64)> = (0..5).map(|j| (j, 0.7)).collect();
    let fit = fit_decay(&flat).unwrap();
    assert!(fit.rate.abs() <= 1e-15 && fit.r_squared == 1.0);
}

#[test]
fn fit_errors() {
    assert!(matches!(fit_decay(&[(0, 1.0), (1, 0.5), (2, 0.2)]), Err(Error::NeedAtLeast4Points(3))));
    let bad = [(0, 1.0), (1, 0.5), (2, 0.0), (3, 0.1)];
    assert!(matches!(fit_decay(&bad), Err(Error::NonPositiveNorm { j: 2, .. })));
}

#[test]
fn envelope_calibrations() {
    let pts: Vec<(i32, f64)> = (4..10).map(|j| (j, part1_shape::<f64>(j) * if j == 6 { 1.01 } else { 1.0 })).collect();
    let first = envelope_check(&pts, part1_shape, Calibration::First).unwrap();
    assert!(!first.holds && first.attained_at == 6);
    let max = envelope_check(&pts, part1_shape, Calibration::Max).unwrap();
    assert!(max.holds && (max.constant - 1.01).abs() <= 1e-12);
    assert!(part2_shape::<f64>(6, 12) > part1_shape::<f64>(12));
}

fn part1_setup() -> DecaySetup<f64> {
    DecaySetup {
        family: DecayFamily::Part1,
        n_mod: 0.0,
        b: 1.0,
        branch: SqrtBranch::Abs,
        template: GridTemplate::new(128, 4.0),
        tol: 1e-9,
        max_iter: 200_000,
    }
}

#[test]
fn block_norm_matches_svd() {
    let setup = part1_setup();
    let (block, grid) = setup.instance(5).unwrap();
    let est = l2_norm_power_iteration(&block, &grid, 1e-10, 200_000).unwrap();
    let w = block_matrix(&block, &grid).unwrap();
    let oracle = svd_norm(&w);
    assert!((est.value - oracle).abs() <= 1e-6 * oracle);
}

#[test]
fn decay_curve_windows() {
    let curve = decay_curve(&part1_setup(), 2..=5).unwrap();
    assert_eq!(curve.iter().map(|c| c.0).collect::<Vec<_>>(), vec![2, 3, 4, 5]);
    assert!(curve.iter().all(|c| c.1.value > 0.0 && c.1.value.is_finite()));
    let part2 = DecaySetup { family: DecayFamily::Part2 { k: 6 }, b: 1.5, ..part1_setup() };
    assert!(decay_curve(&part2, 0..=10).unwrap().is_empty());
    assert_eq!(decay_curve(&part2, 0..=40).unwrap().len(), 2);
}

fn small_sweep(xi: Vec<f64>, h: Vec<f64>) -> LemmaSweep<f64> {
    LemmaSweep {
        variant: PhaseVariant::Part1,
        j_range: 10..=14,
        k: 0,
        bx: 1.0,
        h_set: h,
        xi_set: xi,
        v_set: vec![0.0],
        shape: LemmaShape::Display,
        tol: 1e-10,
    }
}

#[test]
fn lemma_integral_without_phase_does_not_decay() {
    let env = oscillatory_lemma_envelope(&small_sweep(vec![0.0], vec![1.0])).unwrap();
    let first = env.rows[0].measured;
    assert!(first > 0.0);
    for row in &env.rows {
        assert!((row.measured - first).abs() <= 1e-8 * first);
    }
}

#[test]
fn lemma_rows_are_complete_and_consistent() {
    let sweep = small_sweep(vec![-0.5, 0.5], vec![0.5, 1.0]);
    let env = oscillatory_lemma_envelope(&sweep).unwrap();
    assert_eq!(env.rows.len(), 5 * 2 * 2);
    assert_eq!(env.calibration_j, 10);
    for r in &env.rows {
        assert!(r.psi_c2 > 0.0 && r.measured >= 0.0);
        assert!((r.normalized - r.measured / r.psi_c2).abs() <= 1e-15);
        assert!((r.envelope - env.constant * r.shape).abs() <= 1e-15 * r.envelope.max(1.0));
    }
    assert_eq!(env.h_uniform, env.rows.iter().all(|r| r.within));
    let bad = LemmaSweep { variant: PhaseVariant::Part2, k: 6, j_range: 4..=12, ..sweep };
    assert!(matches!(oscillatory_lemma_envelope(&bad), Err(Error::InvalidInput(_))));
}
