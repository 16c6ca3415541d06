//! Numerical thresholds shared by the checks and the reports.

/// Accepted deviation of a p-norm from 1 for "normalized" inputs.
pub const NORMALIZED: f64 = 1e-6;

/// Target accuracy of an empirical distribution at default orders.
pub const DISTRIBUTION: f64 = 2e-3;

/// Verdict tolerance for checks limited by distribution accuracy.
pub const DISTRIBUTION_VERDICT: f64 = 5e-3;

/// Verdict tolerance for checks that only involve quadrature of smooth data.
pub const QUADRATURE_VERDICT: f64 = 1e-6;

/// Band around zero inside which `mu - mu0` has no sign.
pub const CROSSING_BAND: f64 = 5e-3;

/// Largest `mu0(t)` inspected when locating the crossing of `mu` and `mu0`.
/// Half of the finely resolved mass of the plane and disk rules.
pub const CROSSING_WINDOW: f64 = 4.0;

/// Smallest `mu(t)` at which the differential inequality is tested.
pub const MU_FLOOR: f64 = 1e-3;

/// Mass window used when comparing distributions on surfaces of infinite area.
pub const REFERENCE_MASS: f64 = 1.0;

/// Relative tolerance of the embedded Runge-Kutta pair.
pub const ODE_RTOL: f64 = 1e-11;

/// Relative accuracy requested from one-dimensional integrals.
pub const LINE_RTOL: f64 = 1e-12;

/// Negative part of an entropy-type integral beyond which it is called divergent.
pub const DIVERGENCE_CAP: f64 = 1e6;

/// Below this, `x ln x` is evaluated as 0.
pub const XLOGX_CUTOFF: f64 = 1e-300;

/// Midpoint-convexity slack for tabulated weights.
pub const CONVEXITY_SLACK: f64 = 1e-12;

/// Margin below which a non-linear functional counts as attaining its bound.
pub const EQUALITY_MARGIN: f64 = 1e-4;

/// Relative tolerance of the contractivity comparison.
pub const CONTRACTIVITY: f64 = 1e-9;

/// A region must carry at least this many maximal node weights.
pub const MIN_REGION_NODES: f64 = 10.0;
