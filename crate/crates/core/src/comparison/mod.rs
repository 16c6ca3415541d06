//! The comparison equation `g'(t) = -H(g) / (c g)`.
//!
//! With `H(x) = 4 pi (x - kappa x^2)` the right-hand side is `-k (1 - kappa g)`
//! where `k = 4 pi / c`. Its solution vanishing at `t = 0` is the extremal
//! distribution `mu0`; the general solution through `(t2, mu2)` gives the
//! lower envelope `D(t1, t2, mu2)` for any admissible distribution.

pub mod ode;

use serde::Serialize;

use crate::distribution::EmpiricalDistribution;
use crate::error::{domain, Error, Result};
use crate::geometry::Geometry;
use crate::quadrature::line;
use crate::spaces::SpaceParams;
use crate::tolerances;

use ode::{dopri5, Dopri5Options};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonCurve {
    pub geometry: Geometry,
    pub c: f64,
    pub p: f64,
    /// Constant in `F(t) = C e^{pt}`.
    pub constant: f64,
}

impl ComparisonCurve {
    /// Curve attached to a space: `c` from its subharmonicity bound, `F` from its norm.
    pub fn for_space(space: &SpaceParams) -> Result<Self> {
        space.validate()?;
        Ok(ComparisonCurve {
            geometry: space.geometry(),
            c: space.subharmonicity().c,
            p: space.p(),
            constant: space.normalization_constant(),
        })
    }

    /// `k = 4 pi / c`.
    pub fn rate(&self) -> f64 {
        4.0 * std::f64::consts::PI / self.c
    }

    /// `mu0(t)`, extended by 0 for `t >= 0`.
    pub fn mu0(&self, t: f64) -> f64 {
        if t >= 0.0 {
            return 0.0;
        }
        let k = self.rate();
        match self.geometry {
            Geometry::Sphere => -(k * t).exp_m1(),
            Geometry::Plane => -k * t,
            Geometry::HyperbolicDisk => (-k * t).exp_m1(),
        }
    }

    /// `mu0^{-1}(s)` for `0 <= s < total mass`.
    pub fn mu0_inverse(&self, s: f64) -> Result<f64> {
        let mass = self.geometry.total_mass();
        if !(s >= 0.0 && s < mass) {
            return Err(domain(format!("mu0 inverse needs 0 <= s < {mass}, got {s}")));
        }
        let k = self.rate();
        Ok(match self.geometry {
            Geometry::Sphere => (-s).ln_1p() / k,
            Geometry::Plane => -s / k,
            Geometry::HyperbolicDisk => -s.ln_1p() / k,
        })
    }

    /// Right-hand side `-H(g) / (c g)`.
    pub fn rhs(&self, g: f64) -> f64 {
        -self.rate() * (1.0 - self.geometry.profile_kappa() * g)
    }

    /// Closed-form solution through `(t2, mu2)`, evaluated at `t`.
    pub fn general_solution(&self, t2: f64, mu2: f64, t: f64) -> f64 {
        let k = self.rate();
        match self.geometry {
            Geometry::Sphere => 1.0 - (1.0 - mu2) * (k * (t - t2)).exp(),
            Geometry::Plane => mu2 + k * (t2 - t),
            Geometry::HyperbolicDisk => (1.0 + mu2) * (-k * (t - t2)).exp() - 1.0,
        }
    }

    /// `F(t) = C e^{pt}`.
    pub fn weight_f(&self, t: f64) -> f64 {
        self.constant * (self.p * t).exp()
    }
}

/// `D(t1, t2, mu2)`: the solution of the comparison equation with `g(t2) = mu2`,
/// integrated backward to `t1` by an embedded Runge-Kutta pair.
pub fn solve_backward(geometry: Geometry, c: f64, t2: f64, mu2: f64, t1: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(domain(format!("c must be positive, got {c}")));
    }
    let mass = geometry.total_mass();
    if !(mu2 > 0.0 && mu2 < mass) {
        return Err(domain(format!("mu2 = {mu2} outside (0, {mass})")));
    }
    if !(t1.is_finite() && t2.is_finite()) || t1 > t2 {
        return Err(domain(format!("need t1 <= t2, got t1 = {t1}, t2 = {t2}")));
    }
    if t1 == t2 {
        return Ok(mu2);
    }
    let curve = ComparisonCurve { geometry, c, p: 1.0, constant: 1.0 };
    let opts = Dopri5Options {
        rtol: tolerances::ODE_RTOL,
        atol: 1e-15,
        max_step: (t2 - t1) / 50.0,
    };
    dopri5(|_, g| curve.rhs(g), t2, mu2, t1, opts)
}

/// `int_{-inf}^{0} F'(t) mu0(t) dt`, integrated in `tau = -t` over the half line.
pub fn normalization_check(space: &SpaceParams) -> Result<f64> {
    let curve = ComparisonCurve::for_space(space)?;
    let p = curve.p;
    let integral =
        line::integrate_half_line(|tau| p * (-p * tau).exp() * curve.mu0(-tau), 0.0, &[], 1e-15)?;
    Ok(curve.constant * integral)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotonicityRecord {
    pub t1: f64,
    pub t2: f64,
    pub mu_t2: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub mu_t1: f64,
    pub margin: f64,
    pub pass: bool,
}

/// Checks `D(t1, t2, mu(t2)) <= mu(t1)` for each pair.
pub fn check_monotonicity(
    dist: &EmpiricalDistribution,
    curve: &ComparisonCurve,
    pairs: &[(f64, f64)],
    tolerance: f64,
) -> Result<Vec<MonotonicityRecord>> {
    if pairs.is_empty() {
        return Err(domain("empty list of (t1, t2) pairs"));
    }
    let t0 = dist.t0();
    pairs
        .iter()
        .map(|&(t1, t2)| {
            if !(t1 < t2 && t2 < t0) {
                return Err(domain(format!("pair ({t1}, {t2}) violates t1 < t2 < t0 = {t0}")));
            }
            let mu_t2 = dist.mu_at(t2);
            if mu_t2 <= 0.0 {
                return Err(domain(format!("mu({t2}) = 0")));
            }
            let d = solve_backward(curve.geometry, curve.c, t2, mu_t2, t1)?;
            let mu_t1 = dist.mu_at(t1);
            let margin = mu_t1 - d;
            Ok(MonotonicityRecord { t1, t2, mu_t2, d, mu_t1, margin, pass: margin >= -tolerance })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffRecord {
    pub t: f64,
    /// Slope of the mollified distribution.
    pub lhs: f64,
    /// `-H(mu) / (c mu)`.
    pub rhs: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks `mu'(t) <= -H(mu) / (c mu)` on a grid.
///
/// `mu` is averaged over windows of width `h = (t0 - min grid) / 500` and
/// differenced over `+-h`; the slope is then a weighted mean of `mu'` over
/// `[t - 3h/2, t + 3h/2]`. The tolerance is the distribution accuracy divided
/// by `h` plus the variation of the right-hand side over that window.
pub fn check_diff_inequality(
    dist: &EmpiricalDistribution,
    curve: &ComparisonCurve,
    grid: &[f64],
    mu_floor: f64,
) -> Result<Vec<DiffRecord>> {
    if grid.is_empty() {
        return Err(domain("empty t grid"));
    }
    let t0 = dist.t0();
    let t_lo = grid.iter().copied().fold(f64::INFINITY, f64::min);
    if !t_lo.is_finite() || t_lo >= t0 {
        return Err(domain(format!("grid lies outside the support (t0 = {t0})")));
    }
    let h = (t0 - t_lo) / 500.0;
    grid.iter()
        .map(|&t| {
            let mu = dist.mu_at(t);
            if mu < mu_floor || t >= t0 {
                return Err(domain(format!(
                    "grid point {t} has mu = {mu} below the floor {mu_floor}"
                )));
            }
            let slope = (dist.mollified_mu(t + h, h) - dist.mollified_mu(t - h, h)) / (2.0 * h);
            let centre = dist.mollified_mu(t, h);
            let rhs = curve.rhs(centre);
            let spread = (curve.rhs(dist.mollified_mu(t - 1.5 * h, h))
                - curve.rhs(dist.mollified_mu(t + 1.5 * h, h)))
            .abs();
            let tolerance = tolerances::DISTRIBUTION / h + spread;
            Ok(DiffRecord { t, lhs: slope, rhs, tolerance, pass: slope <= rhs + tolerance })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "t")]
pub enum Crossing {
    Identical,
    At(f64),
}

/// Locates the single sign change of `mu - mu0` (from `+` to `-` as `t` grows),
/// ignoring differences inside `band`. Only levels with `mu0(t) <= window` are
/// inspected.
pub fn single_crossing(
    dist: &EmpiricalDistribution,
    curve: &ComparisonCurve,
    band: f64,
    window: f64,
) -> Result<Crossing> {
    // Levels in increasing t, each with mu at the level and just above it.
    let values = dist.values();
    let mut signs: Vec<(f64, i8)> = Vec::new();
    let mut end = values.partition_point(|v| v.is_finite());
    while end > 0 {
        let t = values[end - 1];
        let mut start = end - 1;
        while start > 0 && values[start - 1] == t {
            start -= 1;
        }
        let m0 = curve.mu0(t);
        if m0 <= window {
            let at = dist.cumulative()[end - 1];
            let above = if start == 0 { 0.0 } else { dist.cumulative()[start - 1] };
            for diff in [at - m0, above - m0] {
                let s = if diff > band {
                    1
                } else if diff < -band {
                    -1
                } else {
                    0
                };
                if s != 0 {
                    signs.push((t, s));
                }
            }
        }
        end = start;
    }
    if signs.is_empty() {
        return Ok(Crossing::Identical);
    }
    let changes = signs.windows(2).filter(|w| w[0].1 != w[1].1).count();
    match changes {
        0 if signs[0].1 > 0 => Ok(Crossing::At(signs.last().expect("non-empty").0)),
        0 => Ok(Crossing::At(signs[0].0)),
        1 if signs[0].1 > 0 => {
            let first_negative = signs.iter().find(|s| s.1 < 0).expect("one change").0;
            Ok(Crossing::At(first_negative))
        }
        _ => Err(Error::Inconsistent { changes }),
    }
}

/// `sup |mu - mu0|` over levels with `mu0 <= REFERENCE_MASS`.
pub fn equality_diagnostic(dist: &EmpiricalDistribution, curve: &ComparisonCurve) -> f64 {
    dist.sup_distance(|t| curve.mu0(t), tolerances::REFERENCE_MASS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn curve(geometry: Geometry, c: f64) -> ComparisonCurve {
        ComparisonCurve { geometry, c, p: 2.0, constant: 1.0 }
    }

    #[test]
    fn closed_forms_solve_the_equation() {
        for (g, c) in [(Geometry::Sphere, 4.0 * PI), (Geometry::Plane, 3.0), (Geometry::HyperbolicDisk, 2.5 * PI)] {
            let cv = curve(g, c);
            let h = 1e-5;
            for k in 1..1000 {
                let t = -5.0 * k as f64 / 1000.0;
                let fd = (cv.mu0(t + h) - cv.mu0(t - h)) / (2.0 * h);
                let m = cv.mu0(t);
                let rhs = -g.profile(m).unwrap() / (c * m);
                assert!((fd - rhs).abs() < 1e-8 * rhs.abs().max(1.0), "{g} t={t}: {fd} vs {rhs}");
            }
            assert!(cv.mu0(-1e-14).abs() < 1e-12);
        }
    }

    #[test]
    fn mu0_examples() {
        let s = ComparisonCurve::for_space(&SpaceParams::SpherePoly { j: 4, p: 2.0 }).unwrap();
        assert!((s.mu0(-2.0) - (1.0 - (-1f64).exp())).abs() < 1e-15);
        let f = ComparisonCurve::for_space(&SpaceParams::Fock { alpha: PI, p: 2.0 }).unwrap();
        assert!((f.mu0(-1.0) - 2.0).abs() < 1e-15);
        let b = ComparisonCurve::for_space(&SpaceParams::Bergman { alpha: 1.5, p: 3.0 }).unwrap();
        assert!((b.mu0(-0.5) - (1f64.exp() - 1.0)).abs() < 1e-14);
        for cv in [s, f, b] {
            for x in [0.0, 0.1, 0.5, 0.9] {
                assert!((cv.mu0(cv.mu0_inverse(x).unwrap()) - x).abs() < 1e-14);
            }
        }
        assert!(s.mu0_inverse(1.0).is_err());
    }

    #[test]
    fn backward_solver_examples() {
        let v = solve_backward(Geometry::Sphere, 4.0 * PI, -2f64.ln(), 0.5, -2.0 * 2f64.ln()).unwrap();
        assert!((v - 0.75).abs() < 1e-10);
        let v = solve_backward(Geometry::Plane, 4.0 * PI, 0.0, 1e-12, -1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        assert_eq!(solve_backward(Geometry::HyperbolicDisk, 2.0, -1.0, 0.3, -1.0).unwrap(), 0.3);
    }

    #[test]
    fn backward_solver_rejects_bad_input() {
        assert!(solve_backward(Geometry::Sphere, 1.0, 0.0, 1.0, -1.0).is_err());
        assert!(solve_backward(Geometry::Plane, 1.0, 0.0, 0.0, -1.0).is_err());
        assert!(solve_backward(Geometry::Plane, 1.0, 0.0, 0.5, 1.0).is_err());
        assert!(solve_backward(Geometry::Plane, -1.0, 0.0, 0.5, -1.0).is_err());
    }

    #[test]
    fn normalization_examples() {
        for space in [
            SpaceParams::SpherePoly { j: 3, p: 2.0 },
            SpaceParams::Fock { alpha: 1.0, p: 2.0 },
            SpaceParams::Bergman { alpha: 2.0, p: 1.0 },
        ] {
            let v = normalization_check(&space).unwrap();
            assert!((v - 1.0).abs() < 1e-10, "{space:?}: {v}");
        }
    }

    #[test]
    fn two_point_mass_is_inconsistent() {
        let d = EmpiricalDistribution::from_samples(Geometry::Sphere, vec![-0.05, -2.0], vec![0.3, 0.7])
            .unwrap();
        let cv = curve(Geometry::Sphere, 2.0 * PI);
        assert!(matches!(
            single_crossing(&d, &cv, 5e-3, 1.0),
            Err(Error::Inconsistent { changes: 3 })
        ));
    }

    #[test]
    fn crossing_serializes() {
        assert_eq!(serde_json::to_string(&Crossing::Identical).unwrap(), r#"{"kind":"identical"}"#);
        assert_eq!(serde_json::to_string(&Crossing::At(-0.5)).unwrap(), r#"{"kind":"at","t":-0.5}"#);
    }
}
