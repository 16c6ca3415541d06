//! Regions of the chart on which local bounds are evaluated.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::geometry::Geometry;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    /// Euclidean disk `|z - center| < radius` in the chart.
    ChartDisk {
        #[serde(serialize_with = "ser_complex")]
        center: Complex64,
        radius: f64,
    },
    /// Geodesic disk of the surface with the given measure.
    GeodesicDisk {
        #[serde(serialize_with = "ser_complex")]
        center: Complex64,
        measure: f64,
    },
    /// `{u >= threshold}` for the function under test.
    Superlevel { threshold: f64 },
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

impl Region {
    /// Checks the descriptor against the geometry.
    pub fn validate(&self, geometry: Geometry) -> Result<()> {
        match *self {
            Region::ChartDisk { center, radius } => {
                if !(radius > 0.0) || !geometry.in_chart(center) {
                    return Err(domain(format!("bad chart disk at {center} with radius {radius}")));
                }
            }
            Region::GeodesicDisk { center, measure } => {
                let mass = geometry.total_mass();
                if !(measure > 0.0 && measure <= mass) || !geometry.in_chart(center) {
                    return Err(domain(format!(
                        "bad geodesic disk at {center} with measure {measure}"
                    )));
                }
            }
            Region::Superlevel { threshold } => {
                if threshold.is_nan() {
                    return Err(domain("superlevel threshold is NaN"));
                }
            }
        }
        Ok(())
    }

    /// Open-disk membership for disks, `u >= threshold` for superlevel sets.
    pub fn contains(&self, geometry: Geometry, z: Complex64, u: f64) -> bool {
        match *self {
            Region::ChartDisk { center, radius } => (z - center).norm() < radius,
            Region::GeodesicDisk { center, measure } => {
                geodesic_measure_of_distance(geometry, center, z) < measure
            }
            Region::Superlevel { threshold } => u >= threshold,
        }
    }
}

/// Measure of the geodesic disk centred at `c` whose boundary passes through `z`.
pub fn geodesic_measure_of_distance(geometry: Geometry, c: Complex64, z: Complex64) -> f64 {
    match geometry {
        Geometry::Sphere => {
            (z - c).norm_sqr() / ((1.0 + z.norm_sqr()) * (1.0 + c.norm_sqr()))
        }
        Geometry::Plane => std::f64::consts::PI * (z - c).norm_sqr(),
        Geometry::HyperbolicDisk => {
            let rho2 = (z - c).norm_sqr() / (1.0 - c.conj() * z).norm_sqr();
            rho2 / (1.0 - rho2)
        }
    }
}
