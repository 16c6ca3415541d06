//! Superlevel-set measure `mu(t) = |{u >= t}|` and the decreasing
//! rearrangement `u*`, both as exact step functions of weighted samples.

use crate::error::{config, domain, Result};
use crate::geometry::Geometry;
use crate::quadrature::QuadratureRule;
use crate::spaces::WeightedFunction;

#[derive(Debug, Clone)]
pub struct EmpiricalDistribution {
    geometry: Geometry,
    /// Sample values, non-increasing; `-inf` samples sit at the end.
    values: Vec<f64>,
    weights: Vec<f64>,
    /// `cumulative[k] = weights[0] + ... + weights[k]`.
    cumulative: Vec<f64>,
    /// Number of finite samples.
    finite: usize,
}

impl EmpiricalDistribution {
    /// Samples `u` at every node of `rule`.
    pub fn build(f: &WeightedFunction, rule: &QuadratureRule) -> Result<Self> {
        if f.geometry() != rule.geometry() {
            return Err(config(format!(
                "function on {} sampled with a {} rule",
                f.geometry(),
                rule.geometry()
            )));
        }
        let values = rule.map(|z| f.u_unchecked(z));
        Self::from_samples(rule.geometry(), values, rule.weights().to_vec())
    }

    /// Distribution of arbitrary weighted samples. Ties are broken by input
    /// position, so the result is deterministic.
    pub fn from_samples(geometry: Geometry, values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if values.len() != weights.len() || values.is_empty() {
            return Err(config(format!(
                "{} values and {} weights",
                values.len(),
                weights.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| v.is_nan() || *v == f64::INFINITY) {
            return Err(config(format!("sample {k} has value {}", values[k])));
        }
        if let Some(k) = weights.iter().position(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(config(format!("sample {k} has weight {}", weights[k])));
        }
        // The index breaks ties, so the order is total and an unstable sort is deterministic.
        let mut keyed: Vec<(f64, usize)> = values.iter().copied().zip(0..).collect();
        let cmp = |a: &(f64, usize), b: &(f64, usize)| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1));
        #[cfg(feature = "parallel")]
        {
            use rayon::slice::ParallelSliceMut;
            keyed.par_sort_unstable_by(cmp);
        }
        #[cfg(not(feature = "parallel"))]
        keyed.sort_unstable_by(cmp);
        let values: Vec<f64> = keyed.iter().map(|&(v, _)| v).collect();
        let weights: Vec<f64> = keyed.iter().map(|&(_, k)| weights[k]).collect();
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for w in &weights {
            acc += w;
            cumulative.push(acc);
        }
        let finite = values.partition_point(|v| v.is_finite());
        Ok(EmpiricalDistribution { geometry, values, weights, cumulative, finite })
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Largest sampled value.
    pub fn t0(&self) -> f64 {
        self.values[0]
    }

    /// Smallest finite sampled value (`-inf` if all samples are `-inf`).
    pub fn t_min(&self) -> f64 {
        if self.finite == 0 {
            f64::NEG_INFINITY
        } else {
            self.values[self.finite - 1]
        }
    }

    pub fn total_mass(&self) -> f64 {
        *self.cumulative.last().expect("non-empty")
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    /// Number of samples with value `>= t`.
    fn count_at_least(&self, t: f64) -> usize {
        self.values.partition_point(|v| *v >= t)
    }

    fn mass_of_first(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.cumulative[k - 1]
        }
    }

    /// `mu(t)`.
    pub fn mu_at(&self, t: f64) -> f64 {
        self.mass_of_first(self.count_at_least(t))
    }

    /// `lim_{tau -> t+} mu(tau)`, the measure of `{u > t}`.
    pub fn mu_above(&self, t: f64) -> f64 {
        self.mass_of_first(self.values.partition_point(|v| *v > t))
    }

    /// `u*(s)`: the value `t` at which `mu` first reaches `s`.
    pub fn rearrangement(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0 && s < self.total_mass()) {
            return Err(domain(format!(
                "rearrangement argument {s} outside [0, {})",
                self.total_mass()
            )));
        }
        let k = self.cumulative.partition_point(|c| *c < s);
        Ok(self.values[k.min(self.values.len() - 1)])
    }

    /// `int_a^b mu(tau) d tau`, exact for the step function.
    pub fn integral_of_mu(&self, a: f64, b: f64) -> f64 {
        debug_assert!(a <= b);
        let hi = self.count_at_least(b);
        let lo = self.values.partition_point(|v| *v > a);
        let mut acc = (b - a) * self.mass_of_first(hi);
        for k in hi..lo {
            acc += self.weights[k] * (self.values[k] - a);
        }
        acc
    }

    /// `mu` averaged over `[t - h/2, t + h/2]`.
    pub fn mollified_mu(&self, t: f64, h: f64) -> f64 {
        self.integral_of_mu(t - 0.5 * h, t + 0.5 * h) / h
    }

    /// `int_0^{mass} G(e^{p u*(s)}) ds`, evaluating `u*` once per step of the
    /// rearrangement (at the midpoint of each mass interval).
    pub fn layer_cake(&self, g: impl Fn(f64) -> f64, p: f64) -> Result<f64> {
        let mut terms = Vec::with_capacity(self.values.len());
        let mut prev = 0.0;
        for &c in &self.cumulative {
            let mid = 0.5 * (prev + c);
            let u = self.rearrangement(mid)?;
            let x = (p * u).exp();
            terms.push(g(x) * (c - prev));
            prev = c;
        }
        Ok(crate::quadrature::compensated_sum(terms))
    }

    /// `sup |mu(t) - mu0(t)|` over all jump points with `mu0(t) <= window`,
    /// using both one-sided values of `mu` at each jump. `mu0` is evaluated
    /// only at finite sample values.
    pub fn sup_distance(&self, mu0: impl Fn(f64) -> f64, window: f64) -> f64 {
        let mut worst = 0.0f64;
        let mut k = 0;
        while k < self.finite {
            let t = self.values[k];
            let above = self.mass_of_first(k);
            // Skip ties so `at` is the full right-continuous value.
            let mut end = k + 1;
            while end < self.finite && self.values[end] == t {
                end += 1;
            }
            let at = self.cumulative[end - 1];
            let m0 = mu0(t);
            if m0 <= window {
                worst = worst.max((at - m0).abs()).max((above - m0).abs());
            }
            k = end;
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{Coherent, SpaceParams};
    use num_complex::Complex64;

    fn synthetic() -> EmpiricalDistribution {
        EmpiricalDistribution::from_samples(
            Geometry::Sphere,
            vec![-1.0, 0.5, f64::NEG_INFINITY, -1.0, 2.0],
            vec![0.1, 0.2, 0.3, 0.15, 0.25],
        )
        .unwrap()
    }

    #[test]
    fn step_function_values() {
        let d = synthetic();
        assert_eq!(d.t0(), 2.0);
        assert_eq!(d.t_min(), -1.0);
        assert_eq!(d.mu_at(3.0), 0.0);
        assert!((d.mu_at(2.0) - 0.25).abs() < 1e-15);
        assert!((d.mu_at(0.0) - 0.45).abs() < 1e-15);
        assert!((d.mu_at(-1.0) - 0.7).abs() < 1e-15);
        assert!((d.mu_at(-1e300) - 0.7).abs() < 1e-15);
        assert!((d.mu_at(f64::NEG_INFINITY) - 1.0).abs() < 1e-15);
        assert!((d.mu_above(-1.0) - 0.45).abs() < 1e-15);
    }

    #[test]
    fn rearrangement_is_generalized_inverse() {
        let d = synthetic();
        assert_eq!(d.rearrangement(0.0).unwrap(), 2.0);
        assert_eq!(d.rearrangement(0.25).unwrap(), 2.0);
        assert_eq!(d.rearrangement(0.26).unwrap(), 0.5);
        assert_eq!(d.rearrangement(0.6).unwrap(), -1.0);
        assert_eq!(d.rearrangement(0.9).unwrap(), f64::NEG_INFINITY);
        assert!(d.rearrangement(1.0).is_err());
        assert!(d.rearrangement(-0.1).is_err());
        for t in [2.0, 0.5, 0.0, -1.0] {
            assert!(d.rearrangement(d.mu_at(t)).unwrap() >= t);
        }
    }

    #[test]
    fn integral_of_mu_matches_riemann_sum() {
        let d = synthetic();
        let (a, b) = (-1.7, 2.3);
        let n = 400_000;
        let h = (b - a) / n as f64;
        let riemann: f64 = (0..n).map(|k| d.mu_at(a + (k as f64 + 0.5) * h) * h).sum();
        assert!((d.integral_of_mu(a, b) - riemann).abs() < 1e-5);
    }

    #[test]
    fn rejects_bad_samples() {
        assert!(EmpiricalDistribution::from_samples(Geometry::Plane, vec![f64::NAN], vec![1.0]).is_err());
        assert!(EmpiricalDistribution::from_samples(Geometry::Plane, vec![0.0], vec![0.0]).is_err());
        assert!(EmpiricalDistribution::from_samples(Geometry::Plane, vec![], vec![]).is_err());
    }

    #[test]
    fn sphere_coherent_matches_closed_form() {
        let f = WeightedFunction::from_coefficients(
            SpaceParams::SpherePoly { j: 2, p: 2.0 },
            vec![Complex64::new(1.0, 0.0)],
        )
        .unwrap();
        let d = EmpiricalDistribution::build(&f, &f.default_rule().unwrap()).unwrap();
        assert!((d.mu_at(-2f64.ln()) - 0.5).abs() < 2e-3);
        assert!((d.rearrangement(0.5).unwrap() + 2f64.ln()).abs() < 2e-3);
        assert_eq!(d.mu_at(d.t0() + 1.0), 0.0);
        assert!((d.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bergman_coherent_at_minus_ln_two() {
        let f = WeightedFunction::coherent_state(
            SpaceParams::Bergman { alpha: 2.0, p: 2.0 },
            Coherent::Point(Complex64::new(0.0, 0.0)),
        )
        .unwrap();
        let d = EmpiricalDistribution::build(&f, &f.default_rule().unwrap()).unwrap();
        assert!((d.mu_at(-2f64.ln()) - 1.0).abs() < 2e-3);
    }
}
