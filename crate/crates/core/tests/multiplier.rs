use num_complex::Complex64;
use pcarleson::multiplier::{
    check_anisotropic_homogeneity, check_conjugation_symmetry, eval_line, eval_m2, LineSpec, Slope,
};
use pcarleson::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const TOL: f64 = 1e-8;

/// ∂ξ m₂ = i ∫ e^{i(ξt + ηt²)} dt = i √(π/|η|) e^{±iπ/4} e^{−iξ²/(4η)} and m₂(0, η) = 0,
/// so m₂ is a Fresnel-type integral in ξ; composite Simpson on [0, ξ].
fn fresnel_oracle(xi: f64, eta: f64) -> Complex64 {
    let n = 400_000;
    let h = xi / n as f64;
    let f = |u: f64| Complex64::from_polar(1.0, -u * u / (4.0 * eta));
    let mut s = f(0.0) + f(xi);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += f(i as f64 * h) * w;
    }
    let integral = s * (h / 3.0);
    let pref = Complex64::i() * (PI / eta.abs()).sqrt() * Complex64::from_polar(1.0, eta.signum() * PI / 4.0);
    pref * integral
}

const REFERENCE: [(f64, f64, f64, f64); 6] = [
    (1.0, 1.0, -1.141526048550185, 1.349481065134576),
    (2.0, 3.0, -1.271676396507072, 1.5907335748108),
    (7.0, 3.0, 0.8521638522952692, 3.101019382931728),
    (-20.0, 20.0, -0.4319214635367083, -2.495675302950312),
    (20.0, -0.05, 0.01577536616412783, 3.177951059197161),
    (0.3, 0.01, -0.3031692917054769, 4.204675061029864),
];

#[test]
fn reference_values_match_fresnel_route() {
    for (xi, eta, re, im) in REFERENCE {
        let frozen = Complex64::new(re, im);
        let oracle = fresnel_oracle(xi, eta);
        assert!((oracle - frozen).norm() <= 1e-7, "oracle drift at ({xi}, {eta}): {oracle}");
        let v = eval_m2(xi, eta, TOL).unwrap();
        assert!((v.value - frozen).norm() <= 1e-7, "({xi}, {eta}): {} vs {frozen}", v.value);
        assert!(v.error >= 0.0 && v.error <= 1e-6);
    }
}

#[test]
fn closed_form_axes() {
    for xi in [1.0, 3.5, -0.2, -40.0] {
        let v = eval_m2(xi, 0.0, TOL).unwrap();
        assert!((v.value - Complex64::new(0.0, PI * f64::signum(xi))).norm() <= 1e-6);
    }
    for eta in [0.0, 1.0, -5.0] {
        assert_eq!(eval_m2(0.0, eta, TOL).unwrap().value, Complex64::new(0.0, 0.0));
    }
}

#[test]
fn invalid_arguments() {
    assert!(matches!(eval_m2(1.0, 1.0, 0.0), Err(Error::InvalidInput(_))));
    assert!(matches!(eval_m2(f64::NAN, 1.0, TOL), Err(Error::InvalidInput(_))));
    assert!(matches!(check_anisotropic_homogeneity(1.0, 1.0, -1.0, TOL), Err(Error::InvalidInput(_))));
}

#[test]
fn line_restrictions() {
    let v = eval_line(LineSpec { slope: Slope::Finite(0.0), offset: 2.5 }, 0.0, TOL).unwrap();
    assert!((v.value - Complex64::new(0.0, PI)).norm() <= 1e-6);
    let a = eval_line(LineSpec { slope: Slope::Infinite, offset: 3.0 }, 2.0, TOL).unwrap();
    assert_eq!(a.value, eval_m2(2.0, 3.0, TOL).unwrap().value);
    let b = eval_line(LineSpec { slope: Slope::Finite(2.0), offset: 1.0 }, 3.0, TOL).unwrap();
    assert!((b.value - Complex64::new(0.8521638522952692, 3.101019382931728)).norm() <= 1e-7);
}

#[test]
fn symmetry_examples() {
    assert!(check_anisotropic_homogeneity(1.0, 0.0, 7.0, TOL).unwrap() <= 1e-12);
    assert_eq!(check_anisotropic_homogeneity(0.0, 1.0, 3.0, TOL).unwrap(), 0.0);
    assert!(check_anisotropic_homogeneity(1.0, 1.0, 2.0, TOL).unwrap() <= 2.0 * TOL);
    assert!(check_conjugation_symmetry(1.0, 0.0, TOL).unwrap() <= 2.0 * TOL);
    assert_eq!(check_conjugation_symmetry(0.0, 5.0, TOL).unwrap(), 0.0);
    assert!(check_conjugation_symmetry(2.0, 3.0, TOL).unwrap() <= 2.0 * TOL);
}

#[test]
fn symmetry_laws_on_random_triples() {
    let tol = 1e-6;
    let mut r = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let xi: f64 = r.gen_range(-20.0..20.0);
        let eta: f64 = r.gen_range(-20.0..20.0);
        let lambda: f64 = 10f64.powf(r.gen_range(-1.0..1.0));
        assert!(check_anisotropic_homogeneity(xi, eta, lambda, tol).unwrap() <= 2.0 * tol);
        assert!(check_conjugation_symmetry(xi, eta, tol).unwrap() <= 2.0 * tol);
    }
}

#[test]
fn bounded_on_grid() {
    for i in 0..41 {
        for k in 0..41 {
            let xi = -20.0 + i as f64;
            let eta = -20.0 + k as f64;
            let v = eval_m2(xi, eta, 1e-6).unwrap();
            assert!(v.value.norm() <= 10.0, "|m2({xi}, {eta})| = {}", v.value.norm());
        }
    }
}

#[test]
fn single_precision_agrees() {
    let v = eval_m2(2.0f32, 3.0f32, 1e-3).unwrap();
    assert!((v.value.re - -1.2716764f32).abs() <= 5e-3 && (v.value.im - 1.5907336f32).abs() <= 5e-3);
}
