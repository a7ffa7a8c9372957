use num_complex::Complex64;
use pcarleson::kernels::bump_psi0;
use pcarleson::quadrature::{
    integrate_adaptive, integrate_adaptive_with, integrate_oscillatory, integrate_pv, AdaptiveOptions, Interval,
    LinearPhase, PvSpec, QuadraticPhase, ZeroPhase,
};
use pcarleson::Error;

fn iv(a: f64, b: f64) -> Interval<f64> {
    Interval::new(a, b).unwrap()
}

fn re(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Complex64 {
    move |t| Complex64::new(f(t), 0.0)
}

const SI_1: f64 = 0.946_083_070_367_183_1;

#[test]
fn polynomial_and_exponential() {
    let r = integrate_adaptive(re(|t| t), iv(0.0, 1.0), 1e-12).unwrap();
    assert!((r.value.re - 0.5).abs() <= 1e-12);
    assert!(r.evaluations > 0 && r.abs_error_estimate >= 0.0);
    let r = integrate_adaptive(|t: f64| Complex64::from_polar(1.0, t), iv(-1.0, 1.0), 1e-12).unwrap();
    assert!((r.value - Complex64::new(2.0 * 1f64.sin(), 0.0)).norm() <= 1e-12);
}

#[test]
fn bump_over_t_matches_composite_oracle() {
    let r = integrate_adaptive(re(|t| bump_psi0(t) / t), iv(0.5, 2.0), 1e-12).unwrap();
    let n = 1_000_000;
    let h = 1.5 / n as f64;
    let composite: f64 = (0..n).map(|m| {
        let t = 0.5 + (m as f64 + 0.5) * h;
        bump_psi0(t) / t * h
    }).sum();
    assert!((r.value.re - composite).abs() < 1e-10);
    // The partition of unity makes this integral exactly ln 2.
    assert!((r.value.re - std::f64::consts::LN_2).abs() < 1e-11);
}

#[test]
fn rejects_nonfinite_and_budget_exhaustion() {
    let err = integrate_adaptive(re(|t| if t > 0.3 { f64::NAN } else { 1.0 }), iv(0.0, 1.0), 1e-8).unwrap_err();
    assert!(matches!(err, Error::NonFinite { .. }));
    let opts = AdaptiveOptions { max_subdivisions: 3 };
    let err = integrate_adaptive_with(re(|t| (50.0 * t).sin().abs()), iv(0.0, 10.0), 1e-12, opts).unwrap_err();
    assert!(matches!(err, Error::MaxSubdivisions { .. }));
}

#[test]
fn principal_values() {
    let r = integrate_pv(re(|_| 1.0), iv(-1.0, 1.0), PvSpec::at(0.0), 1e-12).unwrap();
    assert!(r.value.norm() < 1e-12);
    let r = integrate_pv(re(|_| 1.0), iv(-1.0, 2.0), PvSpec::at(0.0), 1e-12).unwrap();
    assert!((r.value.re - std::f64::consts::LN_2).abs() < 1e-12);
    let r = integrate_pv(|t: f64| Complex64::from_polar(1.0, t), iv(-1.0, 1.0), PvSpec::at(0.0), 1e-12).unwrap();
    assert!((r.value - Complex64::new(0.0, 2.0 * SI_1)).norm() < 1e-11);
    let err = integrate_pv(re(|_| 1.0), iv(0.0, 1.0), PvSpec::at(0.0), 1e-8).unwrap_err();
    assert!(matches!(err, Error::PoleOnBoundary { .. }));
    // Pole outside the interval: ordinary integral.
    let r = integrate_pv(re(|_| 1.0), iv(1.0, 2.0), PvSpec::at(0.0), 1e-12).unwrap();
    assert!((r.value.re - std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn oscillatory_zero_phase_matches_adaptive() {
    let amp = |t: f64| Complex64::new(bump_psi0(t), 0.0);
    let a = integrate_oscillatory(amp, ZeroPhase, iv(0.5, 2.0), 1e-12).unwrap();
    let b = integrate_adaptive(amp, iv(0.5, 2.0), 1e-12).unwrap();
    assert!((a.value - b.value).norm() < 2e-12);
}

#[test]
fn oscillatory_agrees_with_adaptive_when_both_converge() {
    for &lam in &[30.0, 200.0, 1500.0] {
        let amp = |t: f64| Complex64::new(bump_psi0(t) * (1.0 + t * t), 0.0);
        let fast = integrate_oscillatory(amp, LinearPhase { omega: lam }, iv(0.5, 2.0), 1e-11).unwrap();
        let slow = integrate_adaptive(|t: f64| amp(t) * Complex64::from_polar(1.0, lam * t), iv(0.5, 2.0), 1e-11).unwrap();
        let diff = (fast.value - slow.value).norm();
        assert!(diff <= fast.abs_error_estimate + slow.abs_error_estimate + 1e-13, "λ = {lam}: {diff:e}");
    }
}

#[test]
fn smooth_amplitude_decays_faster_than_inverse_square() {
    let amp = |t: f64| Complex64::new(bump_psi0(t), 0.0);
    let values: Vec<f64> = [50.0, 100.0, 200.0, 400.0]
        .iter()
        .map(|&lam| integrate_oscillatory(amp, LinearPhase { omega: lam }, iv(0.5, 2.0), 1e-14).unwrap().value.norm())
        .collect();
    for (k, w) in values.windows(2).enumerate() {
        assert!(w[1] < w[0] / 4.0, "step {k}: {} → {}", w[0], w[1]);
    }
}

#[test]
fn quadratic_phase_van_der_corput_envelope() {
    let amp = |t: f64| Complex64::new(bump_psi0(t), 0.0);
    let lams = [1e2, 1e3, 1e4, 1e5];
    let vals: Vec<f64> = lams
        .iter()
        .map(|&l| integrate_oscillatory(amp, QuadraticPhase { lambda: l }, iv(0.5, 2.0), 1e-13).unwrap().value.norm())
        .collect();
    let c = vals[0] * lams[0].sqrt();
    for (v, l) in vals.iter().zip(&lams) {
        assert!(*v <= c * l.powf(-0.5) * (1.0 + 1e-9));
    }
}

#[test]
fn error_estimates_are_honest_on_closed_form_corpus() {
    use std::f64::consts::{E, LN_2, PI};
    type Case = (Box<dyn Fn(f64) -> Complex64>, f64, f64, Complex64);
    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }
    let corpus: Vec<Case> = vec![
        (Box::new(|t| c(t * t)), 0.0, 1.0, c(1.0 / 3.0)),
        (Box::new(|t| c(t.exp())), 0.0, 1.0, c(E - 1.0)),
        (Box::new(|t| c(t.sin())), 0.0, PI, c(2.0)),
        (Box::new(|t| c(1.0 / (1.0 + t * t))), 0.0, 1.0, c(PI / 4.0)),
        (Box::new(|t| c(t.sqrt())), 0.0, 1.0, c(2.0 / 3.0)),
        (Box::new(|t| c(t.ln())), 1.0, 2.0, c(2.0 * LN_2 - 1.0)),
        (Box::new(|t| c(1.0 / t)), 1.0, 3.0, c(3f64.ln())),
        (Box::new(|t| c((-t * t).exp())), -3.0, 3.0, c(PI.sqrt() * libm_erf(3.0))),
        (Box::new(|t| c(t.cos().powi(2))), 0.0, PI, c(PI / 2.0)),
        (Box::new(|t| c(1.0 / t.sqrt())), 0.01, 1.0, c(2.0 - 0.2)),
        (Box::new(|t| Complex64::from_polar(1.0, 3.0 * t)), 0.0, 1.0, (Complex64::from_polar(1.0, 3.0) - 1.0) / Complex64::new(0.0, 3.0)),
        (Box::new(|t| c(t.powi(5) - 2.0 * t)), -1.0, 2.0, c((64.0 - 1.0) / 6.0 - 3.0)),
        (Box::new(|t| c((10.0 * t).sin())), 0.0, 1.0, c((1.0 - 10f64.cos()) / 10.0)),
        (Box::new(|t| c(t * t.exp())), 0.0, 1.0, c(1.0)),
        (Box::new(|t| c(1.0 / (1.0 + t))), 0.0, 1.0, c(LN_2)),
        (Box::new(|t| c(t.abs())), -1.0, 2.0, c(2.5)),
        (Box::new(|t| c((1.0 - t * t).sqrt())), -1.0, 1.0, c(PI / 2.0)),
        (Box::new(|t| c(t.sinh())), 0.0, 1.0, c(1f64.cosh() - 1.0)),
        (Box::new(|t| c(1.0 / (t * t))), 1.0, 10.0, c(0.9)),
        (Box::new(|t| Complex64::new(t.cos(), t.sin()) * t), 0.0, 1.0, Complex64::new(1f64.cos() + 1f64.sin() - 1.0, 1f64.sin() - 1f64.cos())),
    ];
    assert_eq!(corpus.len(), 20);
    for (k, (f, a, b, exact)) in corpus.iter().enumerate() {
        for &tol in &[1e-6, 1e-10] {
            let r = integrate_adaptive(f, iv(*a, *b), tol).unwrap();
            let err = (r.value - exact).norm();
            assert!(err <= 10.0 * r.abs_error_estimate.max(f64::EPSILON * exact.norm()), "case {k}, tol {tol}: error {err:e} vs estimate {:e}", r.abs_error_estimate);
            assert!(err <= 10.0 * tol, "case {k}, tol {tol}: error {err:e}");
        }
    }
}

/// erf by its Taylor series (enough terms for |x| ≤ 3).
fn libm_erf(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    for n in 1..200 {
        term *= -x * x / n as f64;
        sum += term / (2 * n + 1) as f64;
    }
    2.0 / std::f64::consts::PI.sqrt() * sum
}
