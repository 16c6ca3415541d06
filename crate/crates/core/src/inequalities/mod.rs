//! Both sides of the sharp bounds and their verification reports.
//!
//! `G` is always applied to the bare quantity `e^{pu}` (weighted modulus to
//! the power `p`, without the normalization constant). With that convention
//! the right-hand sides have the closed layer-cake form
//! `int_0^delta G(phi(s)) ds`, where `phi(s) = e^{p mu0^{-1}(s)}` is
//! `(1 - s)^(pj/2)` on the sphere, `exp(-p alpha s / (2 pi))` on the plane and
//! `(1 + s)^(-alpha)` on the disk.

mod regions;
mod report;
mod weights;

pub use regions::{geodesic_measure_of_distance, Region};
pub use report::{Verdict, VerificationReport};
pub use weights::{ConvexWeight, Tabulated};

use crate::comparison::{equality_diagnostic, ComparisonCurve};
use crate::distribution::EmpiricalDistribution;
use crate::error::{config, domain, Error, Result};
use crate::geometry::Geometry;
use crate::quadrature::{line, QuadratureRule};
use crate::spaces::{SpaceParams, WeightedFunction};
use crate::tolerances;

/// `phi(s) = e^{p mu0^{-1}(s)}`.
pub fn extremal_profile(space: &SpaceParams, s: f64) -> f64 {
    match *space {
        SpaceParams::SpherePoly { j, p } => (1.0 - s).max(0.0).powf(p * f64::from(j) / 2.0),
        SpaceParams::Fock { alpha, p } => (-p * alpha * s / (2.0 * std::f64::consts::PI)).exp(),
        SpaceParams::Bergman { alpha, .. } => (1.0 + s).powf(-alpha),
    }
}

/// `s` with `phi(s) = x`, for `0 < x <= 1`.
fn extremal_profile_inverse(space: &SpaceParams, x: f64) -> f64 {
    match *space {
        SpaceParams::SpherePoly { j, p } => 1.0 - x.powf(2.0 / (p * f64::from(j))),
        SpaceParams::Fock { alpha, p } => -2.0 * std::f64::consts::PI * x.ln() / (p * alpha),
        SpaceParams::Bergman { alpha, .. } => x.powf(-1.0 / alpha) - 1.0,
    }
}

fn ensure_normalized(f: &WeightedFunction, rule: &QuadratureRule) -> Result<()> {
    let norm = f.p_norm_with(rule)?;
    if (norm - 1.0).abs() > tolerances::NORMALIZED {
        return Err(Error::NotNormalized { norm, tolerance: tolerances::NORMALIZED });
    }
    Ok(())
}

/// Sum of `w_k G(e^{p u_k})` over the nodes selected by `keep`, together with
/// the negative part of the sum and the selected measure.
fn weighted_functional(
    f: &WeightedFunction,
    g: &ConvexWeight,
    rule: &QuadratureRule,
    us: &[f64],
    keep: impl Fn(usize) -> bool,
) -> Result<(f64, f64, f64)> {
    let p = f.space().p();
    let mut terms = Vec::new();
    let mut negative = Vec::new();
    let mut measure = Vec::new();
    for (k, (&u, &w)) in us.iter().zip(rule.weights()).enumerate() {
        if !keep(k) {
            continue;
        }
        let v = g.eval((p * u).exp());
        if v.is_nan() {
            return Err(Error::NanAtNode { index: k, z: rule.nodes()[k] });
        }
        let t = v * w;
        terms.push(t);
        if t < 0.0 {
            negative.push(-t);
        }
        measure.push(w);
    }
    Ok((
        crate::quadrature::compensated_sum(terms),
        crate::quadrature::compensated_sum(negative),
        crate::quadrature::compensated_sum(measure),
    ))
}

/// `int G(e^{pu}) dm` for a normalized `f`; `-inf` when the negative part of
/// the integrand exceeds the divergence cap.
pub fn functional_lhs(f: &WeightedFunction, g: &ConvexWeight, rule: &QuadratureRule) -> Result<f64> {
    g.validate()?;
    ensure_normalized(f, rule)?;
    let us = rule.map(|z| f.u_unchecked(z));
    let (value, negative, _) = weighted_functional(f, g, rule, &us, |_| true)?;
    if negative > tolerances::DIVERGENCE_CAP {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(value)
}

fn kink_breaks(space: &SpaceParams, g: &ConvexWeight) -> Vec<f64> {
    g.kinks()
        .into_iter()
        .filter(|x| *x > 0.0 && *x < 1.0)
        .map(|x| extremal_profile_inverse(space, x))
        .collect()
}

/// `int_0^delta G(phi(s)) ds`.
fn layer_cake_rhs(space: &SpaceParams, g: &ConvexWeight, delta: f64) -> Result<f64> {
    let breaks = kink_breaks(space, g);
    let tol = 1e-14;
    if let SpaceParams::Bergman { alpha, .. } = *space {
        // s = e^v - 1 turns the algebraic decay into an exponential one.
        let integrand = |v: f64| g.eval((-alpha * v).exp()) * v.exp();
        let vbreaks: Vec<f64> = breaks.iter().map(|s| s.ln_1p()).collect();
        return if delta.is_finite() {
            line::integrate_interval(integrand, 0.0, delta.ln_1p(), &vbreaks, tol)
        } else {
            line::integrate_half_line(integrand, 0.0, &vbreaks, tol)
        };
    }
    let integrand = |s: f64| g.eval(extremal_profile(space, s));
    if delta.is_finite() {
        line::integrate_interval(integrand, 0.0, delta, &breaks, tol)
    } else {
        line::integrate_half_line(integrand, 0.0, &breaks, tol)
    }
}

/// Right-hand side of the global bound, `int_0^{|M|} G(phi(s)) ds`.
pub fn global_rhs(space: &SpaceParams, g: &ConvexWeight) -> Result<f64> {
    space.validate()?;
    g.validate()?;
    layer_cake_rhs(space, g, space.geometry().total_mass())
}

/// The same quantity in the form `int_{-inf}^0 G'(e^{pt}) p e^{pt} mu0(t) dt`,
/// integrated in `tau = -t` over the half line.
pub fn global_rhs_t_form(space: &SpaceParams, g: &ConvexWeight) -> Result<f64> {
    space.validate()?;
    g.validate()?;
    let curve = ComparisonCurve::for_space(space)?;
    let p = space.p();
    let breaks: Vec<f64> =
        g.kinks().into_iter().filter(|x| *x > 0.0 && *x < 1.0).map(|x| -x.ln() / p).collect();
    line::integrate_half_line(
        |tau| {
            let y = (-p * tau).exp();
            if y == 0.0 {
                0.0
            } else {
                g.derivative(y) * p * y * curve.mu0(-tau)
            }
        },
        0.0,
        &breaks,
        1e-14,
    )
}

fn diagnostic(f: &WeightedFunction, rule: &QuadratureRule) -> Result<f64> {
    let dist = EmpiricalDistribution::build(f, rule)?;
    let curve = ComparisonCurve::for_space(f.space())?;
    Ok(equality_diagnostic(&dist, &curve))
}

/// `int G(e^{pu}) dm <= int_0^{|M|} G(phi(s)) ds`.
pub fn verify_global(
    f: &WeightedFunction,
    g: &ConvexWeight,
    rule: &QuadratureRule,
) -> Result<VerificationReport> {
    let lhs = functional_lhs(f, g, rule)?;
    let rhs = global_rhs(f.space(), g)?;
    Ok(VerificationReport::new(
        "global",
        *f.space(),
        Some(g.clone()),
        lhs,
        rhs,
        tolerances::QUADRATURE_VERDICT,
        diagnostic(f, rule)?,
    ))
}

/// `-(j + 1) int rho ln rho dm` with `rho = e^{2u}`, for `p = 2` normalized `f`
/// on the sphere.
pub fn wehrl_entropy(f: &WeightedFunction, rule: &QuadratureRule) -> Result<f64> {
    let SpaceParams::SpherePoly { j, p } = *f.space() else {
        return Err(config("the entropy bound is stated for the sphere space"));
    };
    if p != 2.0 {
        return Err(config(format!("entropy needs p = 2, got p = {p}")));
    }
    ensure_normalized(f, rule)?;
    let integral = rule.integrate(|z| {
        let u = f.u_unchecked(z);
        if u == f64::NEG_INFINITY {
            0.0
        } else {
            ConvexWeight::XLogX.eval((2.0 * u).exp())
        }
    })?;
    Ok(-(f64::from(j) + 1.0) * integral)
}

/// `j / (j + 1) <= S(f)`.
pub fn verify_wehrl(f: &WeightedFunction, rule: &QuadratureRule) -> Result<VerificationReport> {
    let entropy = wehrl_entropy(f, rule)?;
    let SpaceParams::SpherePoly { j, .. } = *f.space() else { unreachable!() };
    let bound = f64::from(j) / (f64::from(j) + 1.0);
    Ok(VerificationReport::new(
        "wehrl",
        *f.space(),
        Some(ConvexWeight::XLogX),
        bound,
        entropy,
        tolerances::QUADRATURE_VERDICT,
        diagnostic(f, rule)?,
    ))
}

/// `||f||_q <= ||f||_p` for `p <= q`, with `p` taken from the function's space.
/// Supported on the sphere and the plane.
pub fn verify_contractivity(f: &WeightedFunction, q: f64) -> Result<VerificationReport> {
    verify_contractivity_at(f, q, None)
}

/// [`verify_contractivity`] with explicit `(radial, angular)` orders for both norms.
pub fn verify_contractivity_at(
    f: &WeightedFunction,
    q: f64,
    orders: Option<(usize, usize)>,
) -> Result<VerificationReport> {
    let p = f.space().p();
    if !(q.is_finite() && q > 0.0) || p > q {
        return Err(domain(format!("contractivity needs 0 < p <= q, got p = {p}, q = {q}")));
    }
    if f.geometry() == Geometry::HyperbolicDisk {
        return Err(config("contractivity is checked on the sphere and the plane only"));
    }
    let rule_for = |g: &WeightedFunction| match orders {
        Some((n_r, n_theta)) => QuadratureRule::build(g.space(), n_r, n_theta),
        None => g.default_rule(),
    };
    let rule_p = rule_for(f)?;
    let rhs = f.p_norm_with(&rule_p)?;
    let fq = f.with_p(q)?;
    let lhs = fq.p_norm_with(&rule_for(&fq)?)?;
    let mut report = VerificationReport::new(
        "contractivity",
        *f.space(),
        None,
        lhs,
        rhs,
        tolerances::CONTRACTIVITY * rhs.max(1.0),
        diagnostic(f, &rule_p)?,
    );
    report.q = Some(q);
    Ok(report)
}

/// `int_0^delta G(phi(s)) ds`, the sharp bound on `int_Omega G(e^{pu}) dm`
/// over regions of measure `delta`. Needs `G > 0` on `(0, inf)`.
pub fn faber_krahn_rhs(space: &SpaceParams, g: &ConvexWeight, delta: f64) -> Result<f64> {
    space.validate()?;
    g.validate()?;
    if !g.positive_on_positive_axis() {
        return Err(config(format!("local bound needs G > 0 on (0, inf); {g} vanishes or is negative there")));
    }
    let mass = space.geometry().total_mass();
    if !(delta > 0.0 && delta <= mass) {
        return Err(domain(format!("budget {delta} outside (0, {mass}]")));
    }
    layer_cake_rhs(space, g, delta)
}

/// `int_Omega G(e^{pu}) dm <= faber_krahn_rhs(|Omega|)` with `|Omega|` measured
/// on the same nodes.
pub fn verify_local(
    f: &WeightedFunction,
    region: &Region,
    g: &ConvexWeight,
    rule: &QuadratureRule,
) -> Result<VerificationReport> {
    region.validate(f.geometry())?;
    g.validate()?;
    if !g.positive_on_positive_axis() {
        return Err(config(format!("local bound needs G > 0 on (0, inf); got {g}")));
    }
    ensure_normalized(f, rule)?;
    let us = rule.map(|z| f.u_unchecked(z));
    let geometry = f.geometry();
    let inside: Vec<bool> = rule
        .nodes()
        .iter()
        .zip(&us)
        .map(|(z, u)| region.contains(geometry, *z, *u))
        .collect();
    let max_inside = rule
        .weights()
        .iter()
        .zip(&inside)
        .filter(|(_, i)| **i)
        .map(|(w, _)| *w)
        .fold(0.0, f64::max);
    let (lhs, _, measure) = weighted_functional(f, g, rule, &us, |k| inside[k])?;
    if max_inside == 0.0 || measure < tolerances::MIN_REGION_NODES * max_inside {
        return Err(Error::Resolution(format!(
            "region of measure {measure} holds fewer than {} node weights",
            tolerances::MIN_REGION_NODES
        )));
    }
    let delta = measure.min(geometry.total_mass());
    let rhs = faber_krahn_rhs(f.space(), g, delta)?;
    let mut report = VerificationReport::new(
        "local",
        *f.space(),
        Some(g.clone()),
        lhs,
        rhs,
        tolerances::DISTRIBUTION_VERDICT,
        diagnostic(f, rule)?,
    );
    report.region = Some(*region);
    report.measure = Some(measure);
    Ok(report)
}

/// The superlevel set `{u >= u*(delta)}`, which maximizes the local functional
/// among regions of measure `delta`.
pub fn best_region(dist: &EmpiricalDistribution, delta: f64) -> Result<Region> {
    if !(delta > 0.0 && delta < dist.total_mass()) {
        return Err(domain(format!("budget {delta} outside (0, {})", dist.total_mass())));
    }
    Ok(Region::Superlevel { threshold: dist.rearrangement(delta)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::Coherent;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn sphere(j: u32, p: f64) -> SpaceParams {
        SpaceParams::SpherePoly { j, p }
    }

    fn one(space: SpaceParams) -> WeightedFunction {
        WeightedFunction::from_coefficients(space, vec![Complex64::new(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn global_rhs_examples() {
        for j in 1..6 {
            let v = global_rhs(&sphere(j, 2.0), &ConvexWeight::Power(1.0)).unwrap();
            assert!((v - 1.0 / (f64::from(j) + 1.0)).abs() < 1e-13);
        }
        let (alpha, p) = (1.7, 3.0);
        let v = global_rhs(&SpaceParams::Fock { alpha, p }, &ConvexWeight::Power(2.0)).unwrap();
        assert!((v - PI / (p * alpha)).abs() < 1e-12);
        // int_0^inf (1+s)^(-2 alpha) ds = 1 / (2 alpha - 1)
        let v = global_rhs(&SpaceParams::Bergman { alpha: 2.0, p: 2.0 }, &ConvexWeight::Power(2.0)).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn s_and_t_forms_agree() {
        let spaces = [sphere(3, 2.0), SpaceParams::Fock { alpha: PI, p: 2.0 }, SpaceParams::Bergman { alpha: 1.5, p: 1.0 }];
        let weights = [
            ConvexWeight::Power(1.0),
            ConvexWeight::Power(2.5),
            ConvexWeight::XLogX,
            ConvexWeight::Hinge(0.3),
        ];
        for s in &spaces {
            for g in &weights {
                let a = global_rhs(s, g).unwrap();
                let b = global_rhs_t_form(s, g).unwrap();
                assert!((a - b).abs() < 1e-9, "{s:?} {g}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn entropy_of_coherent_states() {
        let f = one(sphere(1, 2.0));
        let rule = f.default_rule().unwrap();
        assert!((wehrl_entropy(&f, &rule).unwrap() - 0.5).abs() < 1e-10);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let f = WeightedFunction::coherent_state(
            sphere(4, 2.0),
            Coherent::Su2 { alpha: Complex64::new(h, 0.0), beta: Complex64::new(0.0, h) },
        )
        .unwrap();
        let rule = f.default_rule().unwrap();
        assert!((wehrl_entropy(&f, &rule).unwrap() - 0.8).abs() < 1e-6);
    }

    #[test]
    fn entropy_requires_normalization_and_p_two() {
        let f = WeightedFunction::from_coefficients(sphere(2, 2.0), vec![Complex64::new(2.0, 0.0)]).unwrap();
        let rule = f.default_rule().unwrap();
        assert!(matches!(wehrl_entropy(&f, &rule), Err(Error::NotNormalized { .. })));
        let f = one(sphere(2, 1.0));
        assert!(wehrl_entropy(&f, &f.default_rule().unwrap()).is_err());
    }

    #[test]
    fn functional_lhs_of_linear_weight_is_inverse_constant() {
        let f = one(sphere(3, 2.0));
        let rule = f.default_rule().unwrap();
        let v = functional_lhs(&f, &ConvexWeight::Power(1.0), &rule).unwrap();
        assert!((v - 1.0 / 4.0).abs() < 1e-12);
    }

    #[test]
    fn faber_krahn_closed_forms() {
        let j = 3;
        for delta in [0.1, 0.5, 1.0] {
            let v = faber_krahn_rhs(&sphere(j, 2.0), &ConvexWeight::Power(1.0), delta).unwrap();
            let exact = (1.0 - (1.0 - delta).powi(j as i32 + 1)) / (f64::from(j) + 1.0);
            assert!((v - exact).abs() < 1e-13);
        }
        let (alpha, p, delta) = (2.0, 2.0, 0.7);
        let v = faber_krahn_rhs(&SpaceParams::Fock { alpha, p }, &ConvexWeight::Power(1.0), delta).unwrap();
        let exact = 2.0 * PI / (p * alpha) * (1.0 - (-p * alpha * delta / (2.0 * PI)).exp());
        assert!((v - exact).abs() < 1e-13);
        assert!(faber_krahn_rhs(&sphere(2, 2.0), &ConvexWeight::Hinge(0.2), 0.5).is_err());
        assert!(faber_krahn_rhs(&sphere(2, 2.0), &ConvexWeight::Power(2.0), 1.5).is_err());
    }

    #[test]
    fn contractivity_rejects_reversed_exponents_and_disk() {
        let f = one(sphere(1, 4.0));
        assert!(verify_contractivity(&f, 2.0).is_err());
        let b = one(SpaceParams::Bergman { alpha: 2.0, p: 2.0 });
        assert!(verify_contractivity(&b, 4.0).is_err());
    }

    #[test]
    fn local_bound_on_a_tiny_region_is_unresolved() {
        let f = one(sphere(2, 2.0));
        let rule = QuadratureRule::sphere(32, 8).unwrap();
        let region = Region::ChartDisk { center: Complex64::new(0.5, 0.5), radius: 1e-4 };
        assert!(matches!(
            verify_local(&f, &region, &ConvexWeight::Power(2.0), &rule),
            Err(Error::Resolution(_))
        ));
    }
}
