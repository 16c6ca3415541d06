//! Weighted spaces of analytic functions and their coherent states.
//!
//! | space        | chart  | weighted modulus                    | `C` in `C int e^{pu} dm = 1` |
//! |--------------|--------|-------------------------------------|------------------------------|
//! | `SpherePoly` | sphere | `|f(z)| / (1 + |z|^2)^(j/2)`        | `p j / 2 + 1`                |
//! | `Fock`       | plane  | `|f(z)| exp(-alpha |z|^2 / 2)`      | `p alpha / (2 pi)`           |
//! | `Bergman`    | disk   | `|f(z)| (1 - |z|^2)^(alpha / p)`    | `alpha - 1`                  |
//!
//! `u = log(weighted modulus)` is computed in log space throughout.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{config, domain, Error, Result};
use crate::geometry::Geometry;
use crate::quadrature::{default_angular_order, QuadratureRule, DEFAULT_RADIAL_ORDER};

/// Degree used for random functions in the Fock and Bergman spaces.
pub const DEFAULT_RANDOM_DEGREE: usize = 4;

const UNIT_TOLERANCE: f64 = 1e-12;
/// Relative coefficient defect below which a polynomial counts as `c (z - z0)^j`.
const KERNEL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceParams {
    SpherePoly { j: u32, p: f64 },
    Fock { alpha: f64, p: f64 },
    Bergman { alpha: f64, p: f64 },
}

/// Lower bound `-c` on the Laplace-Beltrami operator of `u`, and the supremum
/// of `u` for a normalized coherent state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubharmonicityData {
    pub c: f64,
    pub t0_extremal: f64,
}

impl SpaceParams {
    pub fn validate(&self) -> Result<()> {
        let p = self.p();
        if !(p > 0.0 && p.is_finite()) {
            return Err(config(format!("p must be a positive real, got {p}")));
        }
        match *self {
            SpaceParams::SpherePoly { j, .. } if j >= 1 => Ok(()),
            SpaceParams::SpherePoly { .. } => {
                Err(config("sphere space needs j >= 1 (j = 0 holds only constants)"))
            }
            SpaceParams::Fock { alpha, .. } if alpha > 0.0 && alpha.is_finite() => Ok(()),
            SpaceParams::Fock { alpha, .. } => {
                Err(config(format!("Fock space needs alpha > 0, got {alpha}")))
            }
            SpaceParams::Bergman { alpha, .. } if alpha > 1.0 && alpha.is_finite() => Ok(()),
            SpaceParams::Bergman { alpha, .. } => {
                Err(config(format!("Bergman space needs alpha > 1, got {alpha}")))
            }
        }
    }

    pub fn geometry(&self) -> Geometry {
        match self {
            SpaceParams::SpherePoly { .. } => Geometry::Sphere,
            SpaceParams::Fock { .. } => Geometry::Plane,
            SpaceParams::Bergman { .. } => Geometry::HyperbolicDisk,
        }
    }

    pub fn p(&self) -> f64 {
        match *self {
            SpaceParams::SpherePoly { p, .. }
            | SpaceParams::Fock { p, .. }
            | SpaceParams::Bergman { p, .. } => p,
        }
    }

    /// Same space with a different exponent.
    pub fn with_p(&self, p: f64) -> Self {
        match *self {
            SpaceParams::SpherePoly { j, .. } => SpaceParams::SpherePoly { j, p },
            SpaceParams::Fock { alpha, .. } => SpaceParams::Fock { alpha, p },
            SpaceParams::Bergman { alpha, .. } => SpaceParams::Bergman { alpha, p },
        }
    }

    /// Constant `C` making `||1|| = 1` (sphere, disk) or `||coherent|| = 1` (plane).
    pub fn normalization_constant(&self) -> f64 {
        match *self {
            SpaceParams::SpherePoly { j, p } => p * f64::from(j) / 2.0 + 1.0,
            SpaceParams::Fock { alpha, p } => p * alpha / (2.0 * PI),
            SpaceParams::Bergman { alpha, .. } => alpha - 1.0,
        }
    }

    pub fn subharmonicity(&self) -> SubharmonicityData {
        let c = match *self {
            SpaceParams::SpherePoly { j, .. } => 2.0 * PI * f64::from(j),
            SpaceParams::Fock { alpha, .. } => 2.0 * alpha,
            SpaceParams::Bergman { alpha, p } => 4.0 * PI * alpha / p,
        };
        SubharmonicityData { c, t0_extremal: 0.0 }
    }

    /// Log of the weight multiplying `|f|`.
    fn log_weight(&self, z: Complex64) -> f64 {
        let r2 = z.norm_sqr();
        match *self {
            SpaceParams::SpherePoly { j, .. } => -0.5 * f64::from(j) * r2.ln_1p(),
            SpaceParams::Fock { alpha, .. } => -0.5 * alpha * r2,
            SpaceParams::Bergman { alpha, p } => (alpha / p) * (-r2).ln_1p(),
        }
    }
}

impl Serialize for SpaceParams {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("geometry", &self.geometry())?;
        match *self {
            SpaceParams::SpherePoly { j, p } => {
                map.serialize_entry("j", &j)?;
                map.serialize_entry("p", &p)?;
            }
            SpaceParams::Fock { alpha, p } | SpaceParams::Bergman { alpha, p } => {
                map.serialize_entry("alpha", &alpha)?;
                map.serialize_entry("p", &p)?;
            }
        }
        map.end()
    }
}

/// Designation of a coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coherent {
    /// `(beta z + conj(alpha))^j` with `|alpha|^2 + |beta|^2 = 1` (sphere).
    Su2 { alpha: Complex64, beta: Complex64 },
    /// Centre `a` (plane, or disk with `|a| < 1`).
    Point(Complex64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Form {
    /// Monomial coefficients, lowest degree first.
    Coefficients(Vec<Complex64>),
    Coherent(Coherent),
}

/// Point of the chart, or the north pole of the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChartPoint {
    Finite(Complex64),
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupResult {
    pub value: f64,
    pub point: ChartPoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedFunction {
    space: SpaceParams,
    form: Form,
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// `log |P(z)|` evaluated through the reversed polynomial when `|z| > 1`,
/// where `P` is viewed as a polynomial of formal degree `d`.
fn log_abs_poly(coeffs: &[Complex64], d: usize, z: Complex64) -> f64 {
    if z.norm_sqr() <= 1.0 {
        horner(coeffs, z).norm().ln()
    } else {
        let w = z.inv();
        let q = reversed_eval(coeffs, d, w);
        d as f64 * z.norm().ln() + q.norm().ln()
    }
}

/// `sum_k c_k w^(d - k)`.
fn reversed_eval(coeffs: &[Complex64], d: usize, w: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=d {
        acc = acc * w + coeffs.get(k).copied().unwrap_or_default();
    }
    acc
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (k, y) in b.iter().enumerate() {
            out[i + k] += x * y;
        }
    }
    out
}

fn poly_pow(base: &[Complex64], n: u32) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..n {
        out = poly_mul(&out, base);
    }
    out
}

fn check_su2(alpha: Complex64, beta: Complex64) -> Result<()> {
    let n = alpha.norm_sqr() + beta.norm_sqr();
    if (n - 1.0).abs() > UNIT_TOLERANCE || !n.is_finite() {
        return Err(domain(format!(
            "(alpha, beta) = ({alpha}, {beta}) is not a unit vector: |alpha|^2 + |beta|^2 = {n}"
        )));
    }
    Ok(())
}

impl WeightedFunction {
    pub fn from_coefficients(space: SpaceParams, coeffs: Vec<Complex64>) -> Result<Self> {
        space.validate()?;
        if coeffs.is_empty() {
            return Err(config("empty coefficient list"));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(config("coefficients must be finite"));
        }
        if let SpaceParams::SpherePoly { j, .. } = space {
            let d = last_nonzero(&coeffs).unwrap_or(0);
            if d > j as usize {
                return Err(config(format!(
                    "degree {d} polynomial does not belong to the degree-{j} sphere space"
                )));
            }
        }
        Ok(WeightedFunction { space, form: Form::Coefficients(coeffs) })
    }

    /// Normalized coherent state.
    pub fn coherent_state(space: SpaceParams, designation: Coherent) -> Result<Self> {
        space.validate()?;
        match (space, designation) {
            (SpaceParams::SpherePoly { .. }, Coherent::Su2 { alpha, beta }) => {
                check_su2(alpha, beta)?
            }
            (SpaceParams::Fock { .. }, Coherent::Point(a)) if a.re.is_finite() && a.im.is_finite() => {}
            (SpaceParams::Bergman { .. }, Coherent::Point(a)) if a.norm_sqr() < 1.0 => {}
            (SpaceParams::Bergman { .. }, Coherent::Point(a)) => {
                return Err(domain(format!("Bergman coherent state needs |a| < 1, got {a}")));
            }
            (s, d) => {
                return Err(config(format!(
                    "coherent designation {d:?} does not fit the {} space",
                    s.geometry()
                )))
            }
        }
        Ok(WeightedFunction { space, form: Form::Coherent(designation) })
    }

    pub fn space(&self) -> &SpaceParams {
        &self.space
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn geometry(&self) -> Geometry {
        self.space.geometry()
    }

    pub fn is_coherent(&self) -> bool {
        matches!(self.form, Form::Coherent(_))
    }

    /// Same function viewed in the space with exponent `p`. Coherent states of
    /// the disk depend on `p`, so their designation is kept and the closed
    /// form is re-read for the new exponent.
    pub fn with_p(&self, p: f64) -> Result<Self> {
        let space = self.space.with_p(p);
        space.validate()?;
        Ok(WeightedFunction { space, form: self.form.clone() })
    }

    /// Degree governing the angular resolution needed for `|f|^p`.
    pub fn effective_degree(&self) -> usize {
        match (&self.form, self.space) {
            (Form::Coefficients(c), _) => last_nonzero(c).unwrap_or(0),
            (Form::Coherent(_), SpaceParams::SpherePoly { j, .. }) => j as usize,
            (Form::Coherent(Coherent::Point(a)), SpaceParams::Fock { alpha, p }) => {
                let x = p * alpha * a.norm() * (a.norm() + 6.0 / (p * alpha).sqrt());
                (1.5 * x).ceil() as usize + 4
            }
            (Form::Coherent(Coherent::Point(a)), SpaceParams::Bergman { .. }) => {
                let r = a.norm();
                if r < 1e-3 {
                    4
                } else {
                    ((36.0 / -r.ln()).ceil() as usize).min(512) + 4
                }
            }
            (Form::Coherent(_), _) => 0,
        }
    }

    /// Quadrature rule at default orders for this function and its space.
    pub fn default_rule(&self) -> Result<QuadratureRule> {
        QuadratureRule::build(
            &self.space,
            DEFAULT_RADIAL_ORDER,
            default_angular_order(self.effective_degree()),
        )
    }

    /// `u(z)`; `-inf` at zeros of `f`.
    pub fn u_log(&self, z: Complex64) -> Result<f64> {
        if !self.geometry().in_chart(z) {
            return Err(domain(format!("point {z} is outside the {} chart", self.geometry())));
        }
        Ok(self.u_unchecked(z))
    }

    pub fn weighted_modulus(&self, z: Complex64) -> Result<f64> {
        Ok(self.u_log(z)?.exp())
    }

    pub(crate) fn u_unchecked(&self, z: Complex64) -> f64 {
        match (&self.form, self.space) {
            (Form::Coefficients(c), SpaceParams::SpherePoly { j, .. }) => {
                let r2 = z.norm_sqr();
                if r2 <= 1.0 {
                    horner(c, z).norm().ln() - 0.5 * f64::from(j) * r2.ln_1p()
                } else {
                    let w = z.inv();
                    reversed_eval(c, j as usize, w).norm().ln()
                        - 0.5 * f64::from(j) * w.norm_sqr().ln_1p()
                }
            }
            (Form::Coefficients(c), space) => {
                let d = c.len() - 1;
                log_abs_poly(c, d, z) + space.log_weight(z)
            }
            (Form::Coherent(Coherent::Su2 { alpha, beta }), SpaceParams::SpherePoly { j, .. }) => {
                let jf = f64::from(j);
                if z.norm_sqr() <= 1.0 {
                    jf * (beta * z + alpha.conj()).norm().ln() - 0.5 * jf * z.norm_sqr().ln_1p()
                } else {
                    let w = z.inv();
                    jf * (beta + alpha.conj() * w).norm().ln() - 0.5 * jf * w.norm_sqr().ln_1p()
                }
            }
            (Form::Coherent(Coherent::Point(a)), SpaceParams::Fock { alpha, .. }) => {
                -0.5 * alpha * (z - a).norm_sqr()
            }
            (Form::Coherent(Coherent::Point(a)), SpaceParams::Bergman { alpha, p }) => {
                let k = alpha / p;
                k * ((-a.norm_sqr()).ln_1p() - 2.0 * (1.0 - z * a.conj()).norm().ln()
                    + (-z.norm_sqr()).ln_1p())
            }
            _ => f64::NAN,
        }
    }

    /// `u` at the north pole of the sphere, `log |c_j|`.
    pub fn u_at_infinity(&self) -> Result<f64> {
        match (&self.form, self.space) {
            (Form::Coefficients(c), SpaceParams::SpherePoly { j, .. }) => {
                Ok(c.get(j as usize).map_or(f64::NEG_INFINITY, |v| v.norm().ln()))
            }
            (Form::Coherent(Coherent::Su2 { beta, .. }), SpaceParams::SpherePoly { j, .. }) => {
                Ok(f64::from(j) * beta.norm().ln())
            }
            _ => Err(domain("only the sphere has a point at infinity")),
        }
    }

    /// `u` in the inverted sphere chart `w = 1/z`, including `w = 0`.
    fn u_inverted(&self, w: Complex64) -> f64 {
        if w == Complex64::new(0.0, 0.0) {
            return self.u_at_infinity().unwrap_or(f64::NAN);
        }
        self.u_unchecked(w.inv())
    }

    /// `||f||_p` at default quadrature orders.
    pub fn p_norm(&self) -> Result<f64> {
        self.p_norm_with(&self.default_rule()?)
    }

    /// `(C int e^{pu} dm)^(1/p)` on the given rule, scaled by `max u` to avoid overflow.
    pub fn p_norm_with(&self, rule: &QuadratureRule) -> Result<f64> {
        if rule.geometry() != self.geometry() {
            return Err(config(format!(
                "rule for {} used with a function on {}",
                rule.geometry(),
                self.geometry()
            )));
        }
        if let Some(sup) = self.coherent_sup() {
            return Ok(sup);
        }
        let p = self.space.p();
        let us = rule.map(|z| self.u_unchecked(z));
        let top = us.iter().copied().filter(|u| u.is_finite()).fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return Err(Error::ZeroFunction);
        }
        let vals: Vec<f64> = us.iter().map(|u| (p * (u - top)).exp()).collect();
        let integral = rule.sum_values(&vals)?;
        Ok(top.exp() * (self.space.normalization_constant() * integral).powf(1.0 / p))
    }

    /// For a multiple of a normalized coherent state, the supremum of the
    /// weighted modulus, which is then also its `p`-norm for every `p`. On the
    /// sphere this covers constants and `c (z - z0)^j`.
    pub fn coherent_sup(&self) -> Option<f64> {
        match (&self.form, self.space) {
            (Form::Coherent(_), _) => Some(1.0),
            (Form::Coefficients(c), SpaceParams::SpherePoly { j, .. }) => {
                let j = j as usize;
                match last_nonzero(c) {
                    None => None,
                    Some(0) => Some(c[0].norm()),
                    Some(d) if d == j => {
                        let lead = c[j];
                        let z0 = -c[j - 1] / (j as f64 * lead);
                        let mut scale = 0.0;
                        let mut defect = 0.0;
                        for (k, ck) in c.iter().enumerate().take(j + 1) {
                            let expected = lead * binomial(j as u32, k as u32) * (-z0).powu((j - k) as u32);
                            scale += expected.norm();
                            defect += (ck - expected).norm();
                        }
                        (defect <= KERNEL_TOLERANCE * scale)
                            .then(|| lead.norm() * (0.5 * j as f64 * z0.norm_sqr().ln_1p()).exp())
                    }
                    Some(_) => None,
                }
            }
            _ => None,
        }
    }

    /// `f / ||f||_p`. Coherent states are returned unchanged.
    pub fn normalize(&self) -> Result<Self> {
        self.normalize_with(&self.default_rule()?)
    }

    pub fn normalize_with(&self, rule: &QuadratureRule) -> Result<Self> {
        match &self.form {
            Form::Coherent(_) => Ok(self.clone()),
            Form::Coefficients(c) => {
                if c.iter().all(|v| v.norm_sqr() == 0.0) {
                    return Err(Error::ZeroFunction);
                }
                let norm = self.p_norm_with(rule)?;
                let scaled = c.iter().map(|v| v / norm).collect();
                Ok(WeightedFunction { space: self.space, form: Form::Coefficients(scaled) })
            }
        }
    }

    /// Coefficients in the monomial basis; sphere coherent states are expanded.
    pub fn coefficients(&self) -> Result<Vec<Complex64>> {
        match (&self.form, self.space) {
            (Form::Coefficients(c), _) => Ok(c.clone()),
            (Form::Coherent(Coherent::Su2 { alpha, beta }), SpaceParams::SpherePoly { j, .. }) => {
                Ok((0..=j)
                    .map(|k| binomial(j, k) * beta.powu(k) * alpha.conj().powu(j - k))
                    .collect())
            }
            _ => Err(config("Fock and Bergman coherent states have no finite expansion")),
        }
    }

    /// Supremum of the weighted modulus: best quadrature node, then a compass
    /// search. On the sphere the search moves to the chart `w = 1/z` beyond the
    /// unit circle and also considers the north pole.
    pub fn sup_weighted_modulus(&self, rule: &QuadratureRule) -> Result<SupResult> {
        let us = rule.map(|z| self.u_unchecked(z));
        let (mut best_u, mut best) = (f64::NEG_INFINITY, None);
        for (k, u) in us.iter().enumerate() {
            if *u > best_u {
                best_u = *u;
                best = Some(rule.nodes()[k]);
            }
        }
        let sphere = self.geometry() == Geometry::Sphere;
        let mut inverted = false;
        let mut start = best.unwrap_or_default();
        if sphere {
            let at_pole = self.u_inverted(Complex64::new(0.0, 0.0));
            if at_pole >= best_u {
                best_u = at_pole;
                inverted = true;
                start = Complex64::new(0.0, 0.0);
            } else if start.norm_sqr() > 1.0 {
                inverted = true;
                start = start.inv();
            }
        }
        if best_u == f64::NEG_INFINITY {
            return Err(Error::ZeroFunction);
        }
        let eval = |x: Complex64| -> f64 {
            if inverted {
                self.u_inverted(x)
            } else if self.geometry().in_chart(x) {
                self.u_unchecked(x)
            } else {
                f64::NEG_INFINITY
            }
        };
        let (point, u) = compass_search(eval, start, best_u, 0.05);
        let point = if inverted {
            if point == Complex64::new(0.0, 0.0) {
                ChartPoint::Infinity
            } else {
                ChartPoint::Finite(point.inv())
            }
        } else {
            ChartPoint::Finite(point)
        };
        Ok(SupResult { value: u.exp(), point })
    }
}

fn last_nonzero(c: &[Complex64]) -> Option<usize> {
    c.iter().rposition(|v| v.norm_sqr() > 0.0)
}

fn compass_search(
    f: impl Fn(Complex64) -> f64,
    start: Complex64,
    start_value: f64,
    step: f64,
) -> (Complex64, f64) {
    let dirs: Vec<Complex64> =
        (0..8).map(|k| Complex64::from_polar(1.0, PI * k as f64 / 4.0)).collect();
    let (mut x, mut fx, mut h) = (start, start_value, step);
    let mut iterations = 0;
    while h > 1e-13 && iterations < 20_000 {
        iterations += 1;
        let mut moved = false;
        for d in &dirs {
            let y = x + d * h;
            let fy = f(y);
            if fy > fx {
                x = y;
                fx = fy;
                moved = true;
                break;
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    (x, fx)
}

/// Möbius isometry of the sphere space,
/// `(T f)(z) = (beta z + conj(alpha))^j f((alpha z - conj(beta)) / (beta z + conj(alpha)))`,
/// as a coefficient vector of length `j + 1`.
pub fn mobius_isometry(
    space: SpaceParams,
    alpha: Complex64,
    beta: Complex64,
    coeffs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let SpaceParams::SpherePoly { j, .. } = space else {
        return Err(config("the Möbius isometry acts on the sphere space only"));
    };
    check_su2(alpha, beta)?;
    if last_nonzero(coeffs).unwrap_or(0) > j as usize {
        return Err(config(format!("polynomial degree exceeds j = {j}")));
    }
    let num = [-beta.conj(), alpha];
    let den = [alpha.conj(), beta];
    let mut out = vec![Complex64::new(0.0, 0.0); j as usize + 1];
    for (k, c) in coeffs.iter().enumerate().take(j as usize + 1) {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let term = poly_mul(&poly_pow(&num, k as u32), &poly_pow(&den, j - k as u32));
        for (i, t) in term.iter().enumerate() {
            out[i] += c * t;
        }
    }
    Ok(out)
}

/// Coefficients of the reproducing kernel `(1 + z conj(w))^j`.
pub fn sphere_kernel(j: u32, w: Complex64) -> Vec<Complex64> {
    (0..=j).map(|k| binomial(j, k) * w.conj().powu(k)).collect()
}

/// Random normalized functions with independent standard complex Gaussian
/// coefficients. Degree `j` on the sphere, `degree` elsewhere.
pub fn random_functions(
    space: SpaceParams,
    degree: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<WeightedFunction>> {
    space.validate()?;
    let d = match space {
        SpaceParams::SpherePoly { j, .. } => j as usize,
        _ => degree,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rule = QuadratureRule::build(&space, DEFAULT_RADIAL_ORDER, default_angular_order(d))?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let coeffs: Vec<Complex64> = (0..=d)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            })
            .collect();
        let f = WeightedFunction::from_coefficients(space, coeffs)?;
        out.push(f.normalize_with(&rule)?);
    }
    Ok(out)
}
