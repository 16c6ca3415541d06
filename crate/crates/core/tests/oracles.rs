//! Checks against closed forms that do not go through the library's own
//! formulas: reproducing kernels, monomial norms, and self-convergence.

use std::f64::consts::PI;

use wehrl_lab::inequalities::wehrl_entropy;
use wehrl_lab::spaces::random_functions;
use wehrl_lab::{Complex64, QuadratureRule, SpaceParams, WeightedFunction};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(c(0.0, 0.0), |acc, a| acc * z + a)
}

fn integrate_complex(rule: &QuadratureRule, f: impl Fn(Complex64) -> Complex64) -> Complex64 {
    rule.nodes().iter().zip(rule.weights()).map(|(z, w)| f(*z) * *w).sum()
}

const POLY: [Complex64; 4] = [
    Complex64::new(0.3, -0.2),
    Complex64::new(-1.1, 0.4),
    Complex64::new(0.25, 0.9),
    Complex64::new(0.5, 0.0),
];

#[test]
fn sphere_kernel_reproduces_point_values() {
    // f(w) = (j + 1) int f(z) conj((1 + z conj w)^j) (1 + |z|^2)^-j dm
    let j = 5;
    let rule = QuadratureRule::sphere(512, 2 * j + 16).unwrap();
    for w in [c(0.0, 0.0), c(0.4, -0.7), c(2.5, 1.0)] {
        let got = integrate_complex(&rule, |z| {
            let kernel = (1.0 + z * w.conj()).powu(j as u32).conj();
            horner(&POLY, z) * kernel / (1.0 + z.norm_sqr()).powi(j as i32)
        }) * (j as f64 + 1.0);
        let want = horner(&POLY, w);
        assert!((got - want).norm() < 1e-11 * want.norm().max(1.0), "w={w}: {got} vs {want}");
    }
}

#[test]
fn fock_kernel_reproduces_point_values() {
    // f(w) = (alpha / pi) int f(z) exp(alpha w conj z) exp(-alpha |z|^2) dxdy
    let alpha = 1.7;
    let rule = QuadratureRule::plane(2.0 * alpha, 1024, 64).unwrap();
    for w in [c(0.0, 0.0), c(0.5, 0.3), c(-1.0, 0.8)] {
        let got = integrate_complex(&rule, |z| {
            horner(&POLY, z) * (alpha * w * z.conj()).exp() * (-alpha * z.norm_sqr()).exp()
        }) * (alpha / PI);
        let want = horner(&POLY, w);
        assert!((got - want).norm() < 1e-10 * want.norm().max(1.0), "w={w}: {got} vs {want}");
    }
}

#[test]
fn bergman_kernel_reproduces_point_values() {
    // dm = dxdy / (pi (1 - |z|^2)^2), so the weighted Bergman identity reads
    // f(w) = (alpha - 1) int f(z) (1 - w conj z)^-alpha (1 - |z|^2)^alpha dm
    for alpha in [2.0, 3.5] {
        let rule = QuadratureRule::hyperbolic(alpha, 1024, 64).unwrap();
        for w in [c(0.0, 0.0), c(0.3, -0.4), c(-0.6, 0.1)] {
            let got = integrate_complex(&rule, |z| {
                horner(&POLY, z) * (1.0 - w * z.conj()).powf(-alpha) * (1.0 - z.norm_sqr()).powf(alpha)
            }) * (alpha - 1.0);
            let want = horner(&POLY, w);
            assert!((got - want).norm() < 1e-9 * want.norm().max(1.0), "alpha={alpha} w={w}: {got} vs {want}");
        }
    }
}

#[test]
fn monomial_norms_match_beta_integrals() {
    // ||z^k||^2 in the sphere space: (j + 1) B(k + 1, j - k + 1) = 1 / binom(j, k).
    let j = 6u32;
    let rule = QuadratureRule::sphere(256, 32).unwrap();
    for k in 0..=j as usize {
        let mut coeffs = vec![c(0.0, 0.0); k + 1];
        coeffs[k] = c(1.0, 0.0);
        let f = WeightedFunction::from_coefficients(SpaceParams::SpherePoly { j, p: 2.0 }, coeffs).unwrap();
        let binom = (0..k).fold(1.0, |acc, i| acc * (j as usize - i) as f64 / (i + 1) as f64);
        let want = (1.0 / binom).sqrt();
        let got = f.p_norm_with(&rule).unwrap();
        assert!((got - want).abs() < 1e-12, "k={k}: {got} vs {want}");
    }
    // Fock: ||z^k||^2 = k! / alpha^k.
    let alpha = 0.8;
    let rule = QuadratureRule::plane(2.0 * alpha, 512, 32).unwrap();
    for k in 0..6usize {
        let mut coeffs = vec![c(0.0, 0.0); k + 1];
        coeffs[k] = c(1.0, 0.0);
        let f = WeightedFunction::from_coefficients(SpaceParams::Fock { alpha, p: 2.0 }, coeffs).unwrap();
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        let want = (fact / alpha.powi(k as i32)).sqrt();
        let got = f.p_norm_with(&rule).unwrap();
        assert!((got - want).abs() < 1e-11 * want, "k={k}: {got} vs {want}");
    }
}

#[test]
fn doubling_the_orders_leaves_entropies_unchanged() {
    let space = SpaceParams::SpherePoly { j: 3, p: 2.0 };
    for f in random_functions(space, 3, 4, 77).unwrap() {
        let coarse = f.default_rule().unwrap();
        let fine = QuadratureRule::build(&space, 2 * coarse.radial_order(), 2 * coarse.angular_order()).unwrap();
        let a = wehrl_entropy(&f, &coarse).unwrap();
        let g = f.normalize_with(&fine).unwrap();
        let b = wehrl_entropy(&g, &fine).unwrap();
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn doubling_the_orders_leaves_norms_unchanged() {
    for space in [SpaceParams::Fock { alpha: PI, p: 3.0 }, SpaceParams::Bergman { alpha: 2.5, p: 1.5 }] {
        let f = WeightedFunction::from_coefficients(space, POLY.to_vec()).unwrap();
        let coarse = f.default_rule().unwrap();
        let fine = QuadratureRule::build(&space, 2 * coarse.radial_order(), 2 * coarse.angular_order()).unwrap();
        let (a, b) = (f.p_norm_with(&coarse).unwrap(), f.p_norm_with(&fine).unwrap());
        assert!((a - b).abs() < 1e-6 * b, "{space:?}: {a} vs {b}");
    }
}
