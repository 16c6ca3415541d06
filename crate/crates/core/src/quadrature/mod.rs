//! Product rules `radial x angular` on the three charts.
//!
//! Every geometry has a measure coordinate `s` with `dm = ds dtheta / (2 pi)`:
//! `s = r^2 / (1 + r^2)` on the sphere, `s = pi r^2` on the plane and
//! `s = r^2 / (1 - r^2)` on the hyperbolic disk. The radial rule is composite
//! Gauss-Legendre in `s` on the region that carries the bulk of the mass, with
//! geometric grading at the origin (and at the north pole). The unbounded
//! tails of the plane and the disk are handled exactly rather than truncated:
//! a Gauss-Laguerre rule in `x = p alpha s / (2 pi)` for the plane, a
//! Gauss-Jacobi rule in `w = r^2` with weight `(1 - w)^(alpha - 2)` for the disk.
//!
//! Each ring of the angular trapezoid is rotated by a golden-ratio offset. This
//! keeps the rule exact for trigonometric polynomials while decorrelating the
//! rings, which matters for level-set measures of non-radial functions.

mod gauss;
pub mod line;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use gauss::{gauss_jacobi, gauss_laguerre, gauss_legendre, GaussRule};

use crate::error::{config, Error, Result};
use crate::geometry::Geometry;
use crate::spaces::SpaceParams;

/// Gauss-Legendre order of one composite panel.
const PANEL_ORDER: usize = 16;
/// Levels of geometric refinement (ratio 4) at singular ends.
const GRADING_LEVELS: usize = 8;
/// Nodes of the Laguerre or Jacobi tail rule.
const TAIL_ORDER: usize = 64;
/// Upper end of the finely resolved part of the plane and the disk, in
/// measure units. It holds `FINE_MASS / 2` times the radial order in nodes.
pub const FINE_MASS: f64 = 8.0;
/// Plane: where the Laguerre tail starts, in units of `x = p alpha s / (2 pi)`.
const PLANE_TAIL_START: f64 = 48.0;
/// Disk: where the Jacobi tail starts, in `w = r^2`.
const DISK_TAIL_START: f64 = 0.99;

pub const DEFAULT_RADIAL_ORDER: usize = 2048;

/// Angular order giving exact trapezoid integration of `|f|^2` for a
/// polynomial of the given degree, with some head room.
pub fn default_angular_order(degree: usize) -> usize {
    2 * degree + 16
}

/// How the unbounded part of the chart is covered.
#[derive(Debug, Clone, PartialEq)]
pub enum Tail {
    /// Compact chart (sphere): nothing is cut.
    None,
    /// Gauss-Laguerre in `x = scale * s` beyond `s_start`.
    Laguerre { s_start: f64, nodes: usize },
    /// Gauss-Jacobi in `w = r^2` on `[w_start, 1)`.
    Jacobi { w_start: f64, nodes: usize },
}

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    geometry: Geometry,
    nodes: Vec<Complex64>,
    weights: Vec<f64>,
    /// Measure coordinate of every node.
    coords: Vec<f64>,
    radial_order: usize,
    angular_order: usize,
    rings: usize,
    tail: Tail,
}

struct Radial {
    s: Vec<f64>,
    /// `1 - s`, kept separately near the north pole of the sphere.
    complement: Vec<f64>,
    ds: Vec<f64>,
}

impl Radial {
    fn new() -> Self {
        Radial { s: Vec::new(), complement: Vec::new(), ds: Vec::new() }
    }

    fn push(&mut self, s: f64, complement: f64, ds: f64) {
        self.s.push(s);
        self.complement.push(complement);
        self.ds.push(ds);
    }

    fn panel(&mut self, rule: &GaussRule, a: f64, b: f64) {
        let (xs, ws) = rule.mapped(a, b);
        for (x, w) in xs.into_iter().zip(ws) {
            self.push(x, 1.0 - x, w);
        }
    }

    /// Panel `[1 - b, 1 - a]` described by its complement, for accurate `1 - s`.
    fn mirrored_panel(&mut self, rule: &GaussRule, a: f64, b: f64) {
        let (xs, ws) = rule.mapped(a, b);
        for (x, w) in xs.into_iter().zip(ws) {
            self.push(1.0 - x, x, w);
        }
    }

    /// Graded panels covering `[0, h]` with ratio 4 towards 0.
    fn graded(&mut self, rule: &GaussRule, h: f64, mirrored: bool) {
        let mut hi = h;
        for level in 0..=GRADING_LEVELS {
            let lo = if level == GRADING_LEVELS { 0.0 } else { hi / 4.0 };
            if mirrored {
                self.mirrored_panel(rule, lo, hi);
            } else {
                self.panel(rule, lo, hi);
            }
            hi = lo;
        }
    }

    /// `panels` panels uniform on `[a, b]`, the first one graded towards `a = 0`.
    fn uniform(&mut self, rule: &GaussRule, a: f64, b: f64, panels: usize, grade_left: bool) {
        let h = (b - a) / panels as f64;
        for k in 0..panels {
            let lo = a + h * k as f64;
            let hi = if k + 1 == panels { b } else { lo + h };
            if k == 0 && grade_left {
                self.graded(rule, hi - lo, false);
            } else {
                self.panel(rule, lo, hi);
            }
        }
    }
}

fn fine_panels(n_r: usize) -> usize {
    (n_r as f64 * FINE_MASS / 2.0 / PANEL_ORDER as f64).ceil() as usize
}

fn check_orders(n_r: usize, n_theta: usize) -> Result<()> {
    if n_r == 0 || n_theta == 0 {
        return Err(config(format!(
            "quadrature orders must be positive (radial {n_r}, angular {n_theta})"
        )));
    }
    Ok(())
}

impl QuadratureRule {
    /// Rule adapted to the weight of `params` (the plane rule depends on `p alpha`,
    /// the disk rule on `alpha`).
    pub fn build(params: &SpaceParams, n_r: usize, n_theta: usize) -> Result<Self> {
        params.validate()?;
        match *params {
            SpaceParams::SpherePoly { .. } => Self::sphere(n_r, n_theta),
            SpaceParams::Fock { alpha, p } => Self::plane(p * alpha, n_r, n_theta),
            SpaceParams::Bergman { alpha, .. } => Self::hyperbolic(alpha, n_r, n_theta),
        }
    }

    /// Default orders for a function of the given (effective) degree.
    pub fn with_defaults(params: &SpaceParams, degree: usize) -> Result<Self> {
        Self::build(params, DEFAULT_RADIAL_ORDER, default_angular_order(degree))
    }

    pub fn sphere(n_r: usize, n_theta: usize) -> Result<Self> {
        check_orders(n_r, n_theta)?;
        let mut radial = Radial::new();
        if n_r < PANEL_ORDER {
            radial.panel(&gauss_legendre(n_r), 0.0, 1.0);
        } else {
            let rule = gauss_legendre(PANEL_ORDER);
            let panels = n_r.div_ceil(PANEL_ORDER).max(2);
            let h = 1.0 / panels as f64;
            radial.graded(&rule, h, false);
            for k in 1..panels - 1 {
                radial.panel(&rule, h * k as f64, h * (k + 1) as f64);
            }
            radial.graded(&rule, h, true);
        }
        let rings = radial.s.len();
        let r_of = |i: usize| (radial.s[i] / radial.complement[i]).sqrt();
        Ok(Self::assemble(Geometry::Sphere, &radial, r_of, n_r, n_theta, Tail::None, rings))
    }

    /// Plane rule for the Gaussian weight `exp(-decay |z|^2 / 2)`, `decay = p alpha`.
    pub fn plane(decay: f64, n_r: usize, n_theta: usize) -> Result<Self> {
        check_orders(n_r, n_theta)?;
        if !(decay > 0.0 && decay.is_finite()) {
            return Err(config(format!("plane rule needs p*alpha > 0, got {decay}")));
        }
        // x = scale * s
        let scale = decay / (2.0 * PI);
        let mut radial = Radial::new();
        let s_tail = (PLANE_TAIL_START / scale).max(FINE_MASS);
        if n_r < PANEL_ORDER {
            radial.panel(&gauss_legendre(n_r), 0.0, FINE_MASS);
            if s_tail > FINE_MASS {
                radial.panel(&gauss_legendre(n_r), FINE_MASS, s_tail);
            }
        } else {
            let rule = gauss_legendre(PANEL_ORDER);
            let panels = n_r.div_ceil(PANEL_ORDER);
            radial.uniform(&rule, 0.0, FINE_MASS, fine_panels(n_r), true);
            if s_tail > FINE_MASS {
                radial.uniform(&rule, FINE_MASS, s_tail, panels.div_ceil(2), false);
            }
        }
        let lag = gauss_laguerre(TAIL_ORDER);
        for (y, w) in lag.nodes.iter().zip(lag.exp_scaled_weights()) {
            let s = s_tail + y / scale;
            radial.push(s, 1.0 - s, w / scale);
        }
        let rings = radial.s.len();
        let r_of = |i: usize| (radial.s[i] / PI).sqrt();
        let tail = Tail::Laguerre { s_start: s_tail, nodes: TAIL_ORDER };
        Ok(Self::assemble(Geometry::Plane, &radial, r_of, n_r, n_theta, tail, rings))
    }

    /// Disk rule for the weight `(1 - |z|^2)^alpha`, `alpha > 1`.
    pub fn hyperbolic(alpha: f64, n_r: usize, n_theta: usize) -> Result<Self> {
        check_orders(n_r, n_theta)?;
        if !(alpha > 1.0 && alpha.is_finite()) {
            return Err(config(format!("hyperbolic rule needs alpha > 1, got {alpha}")));
        }
        let mut radial = Radial::new();
        // Middle part in v = ln(1 + s) = -ln(1 - w).
        let v_lo = (1.0 + FINE_MASS).ln();
        let v_hi = -(1.0 - DISK_TAIL_START).ln();
        let mut middle = Radial::new();
        if n_r < PANEL_ORDER {
            radial.panel(&gauss_legendre(n_r), 0.0, FINE_MASS);
            middle.panel(&gauss_legendre(n_r), v_lo, v_hi);
        } else {
            let rule = gauss_legendre(PANEL_ORDER);
            let panels = n_r.div_ceil(PANEL_ORDER);
            radial.uniform(&rule, 0.0, FINE_MASS, fine_panels(n_r), true);
            middle.uniform(&rule, v_lo, v_hi, panels.div_ceil(2), false);
        }
        for (v, dv) in middle.s.iter().zip(&middle.ds) {
            let s = v.exp_m1();
            radial.push(s, 1.0 - s, dv * v.exp());
        }
        // Tail: int phi ds = int phi (1-w)^-2 dw, Jacobi weight (1-w)^(alpha-2).
        let jac = gauss_jacobi(TAIL_ORDER, alpha - 2.0, 0.0);
        let half = 0.5 * (1.0 - DISK_TAIL_START);
        let factor = half.powf(alpha - 1.0);
        for (x, lam) in jac.nodes.iter().zip(&jac.weights) {
            let one_minus_w = half * (1.0 - x);
            let w = 1.0 - one_minus_w;
            radial.push(w / one_minus_w, 1.0 - w, lam * factor * one_minus_w.powf(-alpha));
        }
        let rings = radial.s.len();
        let r_of = |i: usize| {
            let s = radial.s[i];
            (s / (1.0 + s)).sqrt()
        };
        let tail = Tail::Jacobi { w_start: DISK_TAIL_START, nodes: TAIL_ORDER };
        Ok(Self::assemble(Geometry::HyperbolicDisk, &radial, r_of, n_r, n_theta, tail, rings))
    }

    fn assemble(
        geometry: Geometry,
        radial: &Radial,
        r_of: impl Fn(usize) -> f64,
        radial_order: usize,
        n_theta: usize,
        tail: Tail,
        rings: usize,
    ) -> Self {
        let golden = 0.5 * (5f64.sqrt() - 1.0);
        let total = rings * n_theta;
        let mut nodes = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        let mut coords = Vec::with_capacity(total);
        for i in 0..rings {
            let r = r_of(i);
            let offset = (i as f64 * golden).fract();
            let w = radial.ds[i] / n_theta as f64;
            for k in 0..n_theta {
                let theta = 2.0 * PI * (k as f64 + offset) / n_theta as f64;
                nodes.push(Complex64::from_polar(r, theta));
                weights.push(w);
                coords.push(radial.s[i]);
            }
        }
        QuadratureRule {
            geometry,
            nodes,
            weights,
            coords,
            radial_order,
            angular_order: n_theta,
            rings,
            tail,
        }
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Measure coordinate `s` of each node.
    pub fn measure_coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn radial_order(&self) -> usize {
        self.radial_order
    }

    pub fn angular_order(&self) -> usize {
        self.angular_order
    }

    /// Number of distinct radii.
    pub fn rings(&self) -> usize {
        self.rings
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn total_weight(&self) -> f64 {
        compensated_sum(self.weights.iter().copied())
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    /// Evaluates `f` at every node, in parallel when the `parallel` feature is on.
    /// The output is in node order regardless of scheduling.
    pub fn map<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Complex64) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            self.nodes.par_iter().with_min_len(1024).map(|z| f(*z)).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            self.nodes.iter().map(|z| f(*z)).collect()
        }
    }

    /// `sum_k w_k phi(z_k)` with a fixed-order compensated sum.
    pub fn integrate<F>(&self, phi: F) -> Result<f64>
    where
        F: Fn(Complex64) -> f64 + Sync + Send,
    {
        let values = self.map(phi);
        self.sum_values(&values)
    }

    /// Weighted sum of values already evaluated at the nodes.
    pub fn sum_values(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.nodes.len() {
            return Err(config(format!(
                "{} values for a rule with {} nodes",
                values.len(),
                self.nodes.len()
            )));
        }
        if let Some(index) = values.iter().position(|v| v.is_nan()) {
            return Err(Error::NanAtNode { index, z: self.nodes[index] });
        }
        Ok(compensated_sum(
            values.iter().zip(&self.weights).map(|(v, w)| if *v == 0.0 { 0.0 } else { v * w }),
        ))
    }
}

/// Neumaier summation.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    if sum.is_finite() {
        sum + comp
    } else {
        sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(k: u64) -> f64 {
        (1..=k).map(|v| v as f64).product()
    }

    #[test]
    fn sphere_mass_is_one() {
        for (nr, nt) in [(1, 1), (8, 16), (64, 8), (DEFAULT_RADIAL_ORDER, 20)] {
            let rule = QuadratureRule::sphere(nr, nt).unwrap();
            assert!((rule.total_weight() - 1.0).abs() < 1e-12, "{nr} {nt}");
            assert!(rule.weights().iter().all(|w| *w > 0.0));
        }
    }

    /// int |z^k|^2 / (1+|z|^2)^j dm = k! (j-k)! / (j+1)!  (beta integral).
    #[test]
    fn sphere_exact_for_polynomial_moments() {
        let j = 3u64;
        let rule = QuadratureRule::sphere(8, 16).unwrap();
        for k in 0..=j {
            let v = rule
                .integrate(|z| z.norm_sqr().powi(k as i32) / (1.0 + z.norm_sqr()).powi(j as i32))
                .unwrap();
            let exact = factorial(k) * factorial(j - k) / factorial(j + 1);
            assert!((v - exact).abs() < 1e-14, "k={k}: {v} vs {exact}");
        }
    }

    #[test]
    fn sphere_norm_of_z() {
        let rule = QuadratureRule::sphere(64, 8).unwrap();
        let v = rule.integrate(|z| 2.0 * z.norm_sqr() / (1.0 + z.norm_sqr())).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
    }

    #[test]
    fn plane_gaussian_normalization() {
        let (alpha, p) = (1.0, 2.0);
        let rule = QuadratureRule::plane(p * alpha, 64, 64).unwrap();
        let v = rule.integrate(|z| (-alpha * z.norm_sqr()).exp()).unwrap();
        assert!((p * alpha / (2.0 * PI) * v - 1.0).abs() < 1e-12, "{v}");
    }

    /// int |z|^(2k) exp(-a|z|^2) dA = pi k! / a^(k+1)
    #[test]
    fn plane_gaussian_moments_at_default_order() {
        let a = 1.7;
        let rule = QuadratureRule::plane(a, DEFAULT_RADIAL_ORDER, 16).unwrap();
        for k in 0..6 {
            let v = rule.integrate(|z| z.norm_sqr().powi(k) * (-a * z.norm_sqr() / 2.0).exp()).unwrap();
            let exact = PI * factorial(k as u64) * (2.0 / a).powi(k + 1);
            assert!(((v - exact) / exact).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn hyperbolic_weight_normalization() {
        for alpha in [1.5, 2.0, 3.0, 7.25] {
            let rule = QuadratureRule::hyperbolic(alpha, 64, 4).unwrap();
            let v = rule.integrate(|z| (alpha - 1.0) * (1.0 - z.norm_sqr()).powf(alpha)).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "alpha={alpha}: {v}");
            assert!(rule.nodes().iter().all(|z| z.norm_sqr() < 1.0));
        }
    }

    /// (alpha-1) int |z|^(2k) (1-|z|^2)^alpha dm = k! Gamma(alpha) / Gamma(alpha+k)
    #[test]
    fn hyperbolic_monomial_norms() {
        let alpha = 2.5;
        let rule = QuadratureRule::hyperbolic(alpha, DEFAULT_RADIAL_ORDER, 16).unwrap();
        for k in 0..5 {
            let v = rule
                .integrate(|z| (alpha - 1.0) * z.norm_sqr().powi(k) * (1.0 - z.norm_sqr()).powf(alpha))
                .unwrap();
            let exact =
                (libm::lgamma(k as f64 + 1.0) + libm::lgamma(alpha) - libm::lgamma(alpha + k as f64)).exp();
            assert!(((v - exact) / exact).abs() < 1e-11, "k={k}: {v} vs {exact}");
        }
    }

    #[test]
    fn angular_exactness_for_off_diagonal_terms() {
        let deg = 5;
        let rule = QuadratureRule::sphere(32, default_angular_order(deg)).unwrap();
        for k in 0..=deg {
            for l in 0..=deg {
                if k == l {
                    continue;
                }
                let v = rule
                    .integrate(|z| {
                        let term = z.powu(k as u32) * z.conj().powu(l as u32);
                        term.re / (1.0 + z.norm_sqr()).powi(deg as i32)
                    })
                    .unwrap();
                assert!(v.abs() < 1e-14, "k={k} l={l}: {v}");
            }
        }
    }

    #[test]
    fn zero_orders_are_rejected() {
        assert!(matches!(QuadratureRule::sphere(0, 4), Err(Error::Config(_))));
        assert!(QuadratureRule::plane(2.0, 4, 0).is_err());
        assert!(QuadratureRule::hyperbolic(0.5, 4, 4).is_err());
    }

    #[test]
    fn nan_is_reported_with_its_node() {
        let rule = QuadratureRule::sphere(4, 4).unwrap();
        let target = rule.nodes()[5];
        let err = rule.integrate(|z| if z == target { f64::NAN } else { 1.0 }).unwrap_err();
        assert_eq!(err, Error::NanAtNode { index: 5, z: target });
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let v = compensated_sum([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(v, 2.0);
    }
}
