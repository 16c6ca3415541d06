//! The three model surfaces in their planar charts.
//!
//! The sphere is the round sphere of total area 1, seen through stereographic
//! projection; the plane carries Lebesgue measure; the hyperbolic disk carries
//! the invariant area `dx dy / (pi (1 - |z|^2)^2)`. Each surface satisfies a
//! sharp isoperimetric inequality `perimeter^2 >= H(area)` with
//! `H(x) = 4 pi (x - kappa x^2)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    #[serde(rename = "sphere")]
    Sphere,
    #[serde(rename = "plane")]
    Plane,
    #[serde(rename = "hyperbolic")]
    HyperbolicDisk,
}

impl Geometry {
    pub const ALL: [Geometry; 3] = [Geometry::Sphere, Geometry::Plane, Geometry::HyperbolicDisk];

    /// Token used on the command line and in JSON reports.
    pub fn token(self) -> &'static str {
        match self {
            Geometry::Sphere => "sphere",
            Geometry::Plane => "plane",
            Geometry::HyperbolicDisk => "hyperbolic",
        }
    }

    /// Sign of the Gaussian curvature: +1, 0, -1.
    pub fn curvature_sign(self) -> i8 {
        match self {
            Geometry::Sphere => 1,
            Geometry::Plane => 0,
            Geometry::HyperbolicDisk => -1,
        }
    }

    /// Coefficient `kappa` in `H(x) = 4 pi (x - kappa x^2)`.
    pub fn profile_kappa(self) -> f64 {
        f64::from(self.curvature_sign())
    }

    pub fn total_mass(self) -> f64 {
        match self {
            Geometry::Sphere => 1.0,
            Geometry::Plane | Geometry::HyperbolicDisk => f64::INFINITY,
        }
    }

    pub fn has_finite_mass(self) -> bool {
        self.total_mass().is_finite()
    }

    /// Whether `z` lies in the interior of the chart.
    pub fn in_chart(self, z: Complex64) -> bool {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return false;
        }
        match self {
            Geometry::Sphere | Geometry::Plane => true,
            Geometry::HyperbolicDisk => z.norm_sqr() < 1.0,
        }
    }

    fn check_chart(self, z: Complex64) -> Result<()> {
        if self.in_chart(z) {
            Ok(())
        } else {
            Err(domain(format!("point {z} is outside the {} chart", self.token())))
        }
    }

    /// Density of the surface measure with respect to planar Lebesgue measure.
    pub fn measure_density(self, z: Complex64) -> Result<f64> {
        self.check_chart(z)?;
        let r2 = z.norm_sqr();
        Ok(match self {
            Geometry::Sphere => 1.0 / (PI * (1.0 + r2).powi(2)),
            Geometry::Plane => 1.0,
            Geometry::HyperbolicDisk => 1.0 / (PI * (1.0 - r2).powi(2)),
        })
    }

    /// Factor `lambda(z)` with `Delta_M = lambda(z) Delta_euclidean`.
    pub fn laplacian_conformal_factor(self, z: Complex64) -> Result<f64> {
        self.check_chart(z)?;
        let r2 = z.norm_sqr();
        Ok(match self {
            Geometry::Sphere => PI * (1.0 + r2).powi(2),
            Geometry::Plane => 1.0,
            Geometry::HyperbolicDisk => PI * (1.0 - r2).powi(2),
        })
    }

    fn check_profile_arg(self, x: f64) -> Result<()> {
        let mass = self.total_mass();
        // H extends continuously to the total mass of a compact surface.
        let upper_ok = if mass.is_finite() { x <= mass } else { x < mass };
        if x > 0.0 && upper_ok && x.is_finite() {
            Ok(())
        } else {
            Err(domain(format!(
                "profile argument {x} outside (0, {mass}) for {}",
                self.token()
            )))
        }
    }

    /// Isoperimetric profile `H(x)`.
    pub fn profile(self, x: f64) -> Result<f64> {
        self.check_profile_arg(x)?;
        Ok(self.profile_unchecked(x))
    }

    /// `H'(x) = 4 pi (1 - 2 kappa x)`.
    pub fn profile_derivative(self, x: f64) -> Result<f64> {
        self.check_profile_arg(x)?;
        Ok(4.0 * PI * (1.0 - 2.0 * self.profile_kappa() * x))
    }

    pub(crate) fn profile_unchecked(self, x: f64) -> f64 {
        4.0 * PI * (x - self.profile_kappa() * x * x)
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sphere" => Ok(Geometry::Sphere),
            "plane" => Ok(Geometry::Plane),
            "hyperbolic" => Ok(Geometry::HyperbolicDisk),
            other => Err(Error::Config(format!(
                "unknown geometry '{other}' (expected sphere, plane or hyperbolic)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn densities_at_reference_points() {
        assert!((Geometry::Sphere.measure_density(c(0.0, 0.0)).unwrap() - 1.0 / PI).abs() < 1e-15);
        assert_eq!(Geometry::Plane.measure_density(c(3.0, 4.0)).unwrap(), 1.0);
        assert!(
            (Geometry::HyperbolicDisk.measure_density(c(0.0, 0.0)).unwrap() - 1.0 / PI).abs()
                < 1e-15
        );
    }

    #[test]
    fn hyperbolic_chart_is_open_disk() {
        assert!(matches!(
            Geometry::HyperbolicDisk.measure_density(c(1.0, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(Geometry::HyperbolicDisk.measure_density(c(0.6, 0.8)).is_err());
        assert!(Geometry::HyperbolicDisk.laplacian_conformal_factor(c(0.0, -1.5)).is_err());
    }

    #[test]
    fn conformal_factors() {
        let g = Geometry::Sphere;
        assert!((g.laplacian_conformal_factor(c(0.0, 0.0)).unwrap() - PI).abs() < 1e-15);
        assert!((g.laplacian_conformal_factor(c(0.0, 1.0)).unwrap() - 4.0 * PI).abs() < 1e-14);
        let h = Geometry::HyperbolicDisk;
        assert!((h.laplacian_conformal_factor(c(0.0, 0.0)).unwrap() - PI).abs() < 1e-15);
    }

    /// Delta_M of (alpha/p) log(1 - |z|^2) equals -4 pi alpha / p everywhere,
    /// checked with a five-point Euclidean Laplacian.
    #[test]
    fn hyperbolic_factor_matches_weight_laplacian() {
        let (alpha, p) = (2.5, 1.5);
        let phi = |z: Complex64| (alpha / p) * (1.0 - z.norm_sqr()).ln();
        let h = 1e-4;
        for z in [c(0.1, 0.2), c(-0.5, 0.3), c(0.0, -0.7), c(0.62, -0.41)] {
            let lap = (phi(z + h) + phi(z - h) + phi(z + c(0.0, h)) + phi(z - c(0.0, h))
                - 4.0 * phi(z))
                / (h * h);
            let lm = Geometry::HyperbolicDisk.laplacian_conformal_factor(z).unwrap() * lap;
            assert!((lm + 4.0 * PI * alpha / p).abs() < 1e-5, "{lm}");
        }
    }

    #[test]
    fn profile_values() {
        assert!((Geometry::Sphere.profile(0.5).unwrap() - PI).abs() < 1e-15);
        assert!((Geometry::Plane.profile(1.0).unwrap() - 4.0 * PI).abs() < 1e-15);
        assert!((Geometry::HyperbolicDisk.profile(1.0).unwrap() - 8.0 * PI).abs() < 1e-14);
        assert_eq!(Geometry::Sphere.profile(1.0).unwrap(), 0.0);
        assert!((Geometry::Sphere.profile_derivative(0.25).unwrap() - 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn profile_rejects_out_of_range() {
        assert!(Geometry::Sphere.profile(0.0).is_err());
        assert!(Geometry::Sphere.profile(1.2).is_err());
        assert!(Geometry::Plane.profile(-1.0).is_err());
        assert!(Geometry::HyperbolicDisk.profile(f64::INFINITY).is_err());
    }

    #[test]
    fn tokens_round_trip() {
        for g in Geometry::ALL {
            assert_eq!(g.token().parse::<Geometry>().unwrap(), g);
            assert_eq!(serde_json::to_string(&g).unwrap(), format!("\"{}\"", g.token()));
        }
        assert!("torus".parse::<Geometry>().is_err());
    }

    #[test]
    fn profiles_are_ordered_and_symmetric() {
        for k in 1..1000 {
            let x = k as f64 * 0.01;
            let hp = Geometry::Plane.profile(x).unwrap();
            let hh = Geometry::HyperbolicDisk.profile(x).unwrap();
            assert!(hp > 0.0 && hh >= hp);
            if x < 1.0 {
                let hs = Geometry::Sphere.profile(x).unwrap();
                assert!(hs > 0.0 && hs <= hp);
                let mirrored = Geometry::Sphere.profile(1.0 - x).unwrap();
                assert!((hs - mirrored).abs() < 1e-12);
            }
        }
        assert!(Geometry::Sphere.profile(1e-12).unwrap() < 1e-10);
        assert!(Geometry::Sphere.profile(1.0 - 1e-12).unwrap() < 1e-10);
    }
}
