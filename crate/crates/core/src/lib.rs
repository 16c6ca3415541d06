//! Coherent-state geometries and sharp concentration inequalities.
//!
//! Three weighted spaces of analytic functions are modelled in their planar
//! charts: polynomials of degree at most `j` on the Riemann sphere, the Fock
//! space on the plane and weighted Bergman spaces on the hyperbolic disk. For a
//! function `f` the log-weighted modulus `u` is sampled by a product quadrature
//! rule; its superlevel-set measure `mu(t)` is compared with the explicit
//! solution `mu0` of an isoperimetric comparison equation. On top of that the
//! crate evaluates both sides of the Wehrl-type bounds
//! `int G(e^{pu}) dm <= int_0^{|M|} G(e^{p mu0^{-1}(s)}) ds`, their local
//! (Faber-Krahn) versions on regions of prescribed measure, and the
//! contractivity of the `p`-norm scale, with coherent states as the equality
//! cases.

pub mod comparison;
pub mod distribution;
pub mod error;
pub mod geometry;
pub mod inequalities;
pub mod quadrature;
pub mod spaces;
pub mod tolerances;

pub use comparison::ComparisonCurve;
pub use distribution::EmpiricalDistribution;
pub use error::{Error, Result};
pub use geometry::Geometry;
pub use inequalities::{ConvexWeight, Region, VerificationReport};
pub use quadrature::QuadratureRule;
pub use spaces::{ChartPoint, Coherent, SpaceParams, WeightedFunction};

pub use num_complex::Complex64;
