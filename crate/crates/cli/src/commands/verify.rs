use num_complex::Complex64;
use pcarleson::kernels::{
    bump_partition_defect, comparison_integrals, kernel_k1, kernel_k2, kernel_split_rhs, matrix_lower_bound_check,
    q_factorization_defect, q_vector, remainder_ratio, PhaseSpec, PhaseVariant, TaylorSource,
};
use pcarleson::linalg::Mat;
use pcarleson::multiplier::{check_anisotropic_homogeneity, check_conjugation_symmetry, eval_m2};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::config::Config;
use crate::error::CliError;
use crate::output::{num, RunOutput, Table};
use crate::RunContext;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &str, measured: f64, tolerance: f64) -> Self {
        Check { name: name.into(), measured, tolerance, passed: measured <= tolerance }
    }
}

/// ln((√1.5 + 1)/(√0.5 + 1)).
pub fn middle_closed_form() -> f64 {
    ((1.5f64.sqrt() + 1.0) / (0.5f64.sqrt() + 1.0)).ln()
}

/// ln((√1.5 + 1)/(√1.5 − 1)).
pub fn tail_closed_form() -> f64 {
    ((1.5f64.sqrt() + 1.0) / (1.5f64.sqrt() - 1.0)).ln()
}

fn split_defect(r: &mut ChaCha8Rng, samples: usize, perturb: f64) -> pcarleson::Result<f64> {
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < samples {
        let a: f64 = 10f64.powf(r.gen_range(-2.0..1.0));
        let b: f64 = r.gen_range(-50.0..50.0);
        let s: f64 = 10f64.powf(r.gen_range(-3.0..2.0));
        if (s - a * a).abs() <= 1e-6 * (1.0 + a * a) {
            continue;
        }
        let lhs = kernel_k1(a, b, s)? + kernel_k2(a, b, s)? * (1.0 + perturb);
        let rhs = kernel_split_rhs(a, b, s)?;
        worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
        done += 1;
    }
    Ok(worst)
}

fn q_defect(r: &mut ChaCha8Rng, samples: usize) -> pcarleson::Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let variant = *[PhaseVariant::Part1, PhaseVariant::Part2, PhaseVariant::Outer].choose(r).unwrap();
        let (j, k) = (r.gen_range(0..30), r.gen_range(1..12));
        let (bx, h, s): (f64, f64, f64) = (r.gen_range(1.0..2.0), r.gen_range(0.05..1.0), r.gen_range(0.25..4.0));
        let (_, y0) = PhaseSpec::from_h(variant, 0.0, j, k, bx, h, 0.0)?.radicands(s);
        let xi = r.gen_range(-2.0..(y0 - 0.01).min(2.0));
        let p = PhaseSpec::from_h(variant, r.gen_range(-5.0..5.0), j, k, bx, h, xi)?;
        let (q0, q1) = q_vector(&p, s)?;
        worst = worst.max(q_factorization_defect(&p, s)? / q0.hypot(q1).max(1.0));
    }
    Ok(worst)
}

/// Count of violations of |Ax| ≥ |det A| ‖A‖^{1−n} |x| and the number of checked samples.
fn matrix_corpus(r: &mut ChaCha8Rng, n: usize, samples: usize) -> (usize, usize) {
    let mut violations = 0;
    let mut checked = 0;
    for _ in 0..samples {
        let a = Mat::from_row_major(n, n, (0..n * n).map(|_| r.gen_range(-1.0..1.0)).collect()).unwrap();
        let x: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
        if let Ok((lhs, rhs)) = matrix_lower_bound_check(&a, &x) {
            checked += 1;
            if lhs < rhs * (1.0 - 1e-10) {
                violations += 1;
            }
        }
    }
    (violations, checked)
}

/// Runs every algebraic identity check and reports measured constants.
pub fn cmd_verify(config: &Config, ctx: &RunContext) -> Result<RunOutput, CliError> {
    let s = config.section("verify");
    let split_samples: usize = s.get("split_samples", 1000)?;
    let q_samples: usize = s.get("q_samples", 1000)?;
    let m2_samples: usize = s.get("m2_samples", 100)?;
    let m2_tol: f64 = s.get_checked("m2_tol", 1e-6, super::positive)?;
    s.finish()?;

    let mut r = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut checks = Vec::new();

    checks.push(Check::at_most("k_split_identity", split_defect(&mut r, split_samples, ctx.perturb_k2)?, 1e-12));

    let partition = (0..=1200).map(|i| bump_partition_defect(10f64.powf(-6.0 + i as f64 / 100.0))).fold(0.0, f64::max);
    checks.push(Check::at_most("partition_of_unity", partition, 1e-12));

    checks.push(Check::at_most("q_factorization", q_defect(&mut r, q_samples)?, 1e-10));

    let (v2, n2) = matrix_corpus(&mut r, 2, 10_000);
    let (v3, n3) = matrix_corpus(&mut r, 3, 1_000);
    checks.push(Check::at_most("matrix_lemma_2x2_violations", v2 as f64, 0.0));
    checks.push(Check::at_most("matrix_lemma_3x3_violations", v3 as f64, 0.0));
    let rot = Mat::from_row_major(2, 2, vec![2.0, -1.5, 1.5, 2.0]).unwrap();
    let (l, rr): (f64, f64) = matrix_lower_bound_check(&rot, &[0.7, -0.2])?;
    checks.push(Check::at_most("matrix_lemma_equality", (l - rr).abs() / rr, 1e-12));

    let middle = middle_closed_form();
    let mut middle_dev = 0.0f64;
    let mut tails = (0.0f64, 0.0f64);
    for a in [0.1, 1.0, 10.0] {
        let ci = comparison_integrals(a, 1e-12)?;
        middle_dev = middle_dev.max((ci.middle.value.re - middle).abs());
        tails = (tails.0.max(ci.tail.value.re), tails.1.max(ci.far_tail.value.re));
    }
    let ci = comparison_integrals(1.0, 1e-12)?;
    checks.push(Check::at_most("comparison_middle", middle_dev, 1e-8));
    checks.push(Check::at_most("comparison_tail_bound", tails.0.max(tails.1), 10.0));
    checks.push(Check::at_most("comparison_tail_closed_form", (ci.tail.value.re - tail_closed_form()).abs(), 1e-6));

    let axis = [1.0, -2.5, 40.0]
        .iter()
        .map(|&xi| Ok((eval_m2(xi, 0.0, m2_tol)?.value - Complex64::new(0.0, std::f64::consts::PI * f64::signum(xi))).norm()))
        .collect::<pcarleson::Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    checks.push(Check::at_most("hilbert_axis", axis, 1e-6));
    let (mut hom, mut conj) = (0.0f64, 0.0f64);
    for _ in 0..m2_samples {
        let (xi, eta): (f64, f64) = (r.gen_range(-20.0..20.0), r.gen_range(-20.0..20.0));
        let lambda = 10f64.powf(r.gen_range(-1.0..1.0));
        hom = hom.max(check_anisotropic_homogeneity(xi, eta, lambda, m2_tol)?);
        conj = conj.max(check_conjugation_symmetry(xi, eta, m2_tol)?);
    }
    checks.push(Check::at_most("anisotropic_homogeneity", hom, 2.0 * m2_tol));
    checks.push(Check::at_most("conjugation_symmetry", conj, 2.0 * m2_tol));

    let ratios = [1.0, 10.0, 100.0]
        .iter()
        .map(|&b| remainder_ratio(b, TaylorSource::TrueTaylor))
        .collect::<pcarleson::Result<Vec<f64>>>()?;
    let spread = ratios.iter().map(|x| (x - ratios[0]).abs() / ratios[0]).fold(0.0, f64::max);
    checks.push(Check::at_most("taylor_remainder_scaling", spread, 1e-12));
    let paper_ratio = remainder_ratio(1.0, TaylorSource::PaperCoeffs)?;

    let mut table = Table::new("verify", &["check", "passed", "measured", "tolerance"]);
    for c in &checks {
        table.push(vec![c.name.clone(), c.passed.to_string(), num(c.measured), num(c.tolerance)]);
    }
    let passed = checks.iter().all(|c| c.passed);
    let summary = json!({
        "passed": passed,
        "checks": checks,
        "matrix_samples_checked": [n2, n3],
        "constants": {
            "comparison_middle": ci.middle.value.re,
            "comparison_middle_closed_form": middle,
            "comparison_tail": ci.tail.value.re,
            "comparison_tail_closed_form": tail_closed_form(),
            "comparison_far_tail": ci.far_tail.value.re,
            "remainder_ratio_true_taylor": ratios[0],
            "remainder_ratio_paper_coeffs": paper_ratio,
        },
    });
    Ok(RunOutput { command: "verify".into(), tables: vec![table], summary, passed })
}
