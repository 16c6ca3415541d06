//! Browser front end for `wehrl-lab`.
//!
//! Every operation takes a JSON request and returns a JSON answer, so the
//! same functions run natively in tests and behind `wasm-bindgen` in the page
//! under `www/`.

use serde::{Deserialize, Serialize};
use wehrl_lab::inequalities::{best_region, verify_local};
use wehrl_lab::{
    Coherent, ComparisonCurve, Complex64, ConvexWeight, EmpiricalDistribution, Geometry, QuadratureRule,
    SpaceParams, WeightedFunction, tolerances,
};

/// Radial order used when the request does not give one. Lower than the
/// library default to keep the page responsive.
pub const DEMO_RADIAL_ORDER: usize = 512;

/// The function under test and its quadrature orders.
#[derive(Debug, Clone, Deserialize)]
pub struct FunctionRequest {
    pub geometry: Geometry,
    pub j: Option<u32>,
    pub alpha: Option<f64>,
    #[serde(default = "default_p")]
    pub p: f64,
    /// Monomial coefficients `[re, im]`, lowest degree first.
    pub coeffs: Option<Vec<[f64; 2]>>,
    /// Centre of a coherent state (plane or disk).
    pub coherent: Option<[f64; 2]>,
    /// `[re alpha, im alpha, re beta, im beta]` of a sphere coherent state.
    pub su2: Option<[f64; 4]>,
    pub radial_order: Option<usize>,
    pub angular_order: Option<usize>,
}

fn default_p() -> f64 {
    2.0
}

#[derive(Debug, Clone, Deserialize)]
pub struct CurvesRequest {
    #[serde(flatten)]
    pub function: FunctionRequest,
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_points() -> usize {
    120
}

#[derive(Debug, Clone, Serialize)]
pub struct Curves {
    pub t: Vec<f64>,
    pub mu: Vec<f64>,
    pub mu0: Vec<f64>,
    pub total_mass: f64,
    /// Largest `|mu - mu0|` over the sampled levels.
    pub sup_distance: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct HeatmapRequest {
    #[serde(flatten)]
    pub function: FunctionRequest,
    #[serde(default = "default_size")]
    pub size: usize,
    /// Half width of the chart window; the disk is always shown whole.
    pub extent: Option<f64>,
}

fn default_size() -> usize {
    96
}

#[derive(Debug, Clone, Serialize)]
pub struct Heatmap {
    pub size: usize,
    pub extent: f64,
    /// Row-major `e^u`, top row first; `None` outside the chart.
    pub values: Vec<Option<f64>>,
    pub max: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SweepRequest {
    #[serde(flatten)]
    pub function: FunctionRequest,
    /// Convex weight in command-line syntax, e.g. `power:2`.
    #[serde(rename = "G", default = "default_weight")]
    pub g: String,
    #[serde(default = "default_budgets")]
    pub budgets: usize,
}

fn default_weight() -> String {
    "power:1".into()
}

fn default_budgets() -> usize {
    16
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub budget: f64,
    pub measure: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum DemoError {
    #[error("bad request: {0}")]
    Request(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Lab(#[from] wehrl_lab::Error),
}

pub type Result<T> = std::result::Result<T, DemoError>;

impl FunctionRequest {
    pub fn space(&self) -> Result<SpaceParams> {
        let space = match self.geometry {
            Geometry::Sphere => SpaceParams::SpherePoly { j: self.j.ok_or_else(|| invalid("j is required"))?, p: self.p },
            Geometry::Plane => SpaceParams::Fock { alpha: self.alpha.ok_or_else(|| invalid("alpha is required"))?, p: self.p },
            Geometry::HyperbolicDisk => {
                SpaceParams::Bergman { alpha: self.alpha.ok_or_else(|| invalid("alpha is required"))?, p: self.p }
            }
        };
        space.validate()?;
        Ok(space)
    }

    /// The function, normalized on the rule that is returned with it.
    pub fn build(&self) -> Result<(WeightedFunction, QuadratureRule)> {
        let space = self.space()?;
        let f = match (&self.coeffs, self.coherent, self.su2) {
            (Some(c), None, None) => WeightedFunction::from_coefficients(
                space,
                c.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
            )?,
            (None, Some([re, im]), None) => {
                WeightedFunction::coherent_state(space, Coherent::Point(Complex64::new(re, im)))?
            }
            (None, None, Some([ar, ai, br, bi])) => WeightedFunction::coherent_state(
                space,
                Coherent::Su2 { alpha: Complex64::new(ar, ai), beta: Complex64::new(br, bi) },
            )?,
            _ => return Err(invalid("give exactly one of coeffs, coherent or su2")),
        };
        let rule = QuadratureRule::build(
            &space,
            self.radial_order.unwrap_or(DEMO_RADIAL_ORDER),
            self.angular_order
                .unwrap_or_else(|| wehrl_lab::quadrature::default_angular_order(f.effective_degree())),
        )?;
        let f = f.normalize_with(&rule)?;
        Ok((f, rule))
    }
}

fn invalid(msg: &str) -> DemoError {
    DemoError::Invalid(msg.to_string())
}

/// `mu` and `mu0` on a uniform level grid, from where `mu` reaches the
/// crossing window down to the floor.
pub fn distribution_curves(req: &CurvesRequest) -> Result<Curves> {
    if req.points < 2 {
        return Err(invalid("points must be at least 2"));
    }
    let (f, rule) = req.function.build()?;
    let dist = EmpiricalDistribution::build(&f, &rule)?;
    let curve = ComparisonCurve::for_space(f.space())?;
    let mass = dist.total_mass();
    let t_hi = dist.rearrangement(tolerances::MU_FLOOR)?;
    let t_lo = dist.rearrangement(tolerances::CROSSING_WINDOW.min(0.999 * mass))?;
    let n = req.points;
    let t: Vec<f64> = (0..n)
        .map(|k| if k + 1 == n { t_hi } else { t_lo + (t_hi - t_lo) * k as f64 / (n - 1) as f64 })
        .collect();
    let mu: Vec<f64> = t.iter().map(|&t| dist.mu_at(t)).collect();
    let mu0: Vec<f64> = t.iter().map(|&t| curve.mu0(t)).collect();
    let sup_distance = mu.iter().zip(&mu0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(Curves { t, mu, mu0, total_mass: mass, sup_distance })
}

/// `e^u` sampled on a square grid over the chart.
pub fn modulus_heatmap(req: &HeatmapRequest) -> Result<Heatmap> {
    if req.size < 2 {
        return Err(invalid("size must be at least 2"));
    }
    let (f, _) = req.function.build()?;
    let geometry = f.geometry();
    let extent = match geometry {
        Geometry::HyperbolicDisk => 1.0,
        _ => req.extent.unwrap_or(2.0),
    };
    if !(extent > 0.0 && extent.is_finite()) {
        return Err(invalid("extent must be positive"));
    }
    let n = req.size;
    let step = 2.0 * extent / (n - 1) as f64;
    let mut values = Vec::with_capacity(n * n);
    let mut max = 0.0f64;
    for row in 0..n {
        let y = extent - row as f64 * step;
        for col in 0..n {
            let z = Complex64::new(-extent + col as f64 * step, y);
            let v = if geometry.in_chart(z) { Some(f.weighted_modulus(z)?) } else { None };
            if let Some(v) = v {
                max = max.max(v);
            }
            values.push(v);
        }
    }
    Ok(Heatmap { size: n, extent, values, max })
}

/// Both sides of the local bound on the optimal superlevel sets for a range of
/// budgets.
pub fn faber_krahn_sweep(req: &SweepRequest) -> Result<Vec<SweepRow>> {
    if req.budgets == 0 {
        return Err(invalid("budgets must be positive"));
    }
    let g: ConvexWeight = req.g.parse()?;
    let (f, rule) = req.function.build()?;
    let dist = EmpiricalDistribution::build(&f, &rule)?;
    let top = 0.9 * dist.total_mass().min(tolerances::CROSSING_WINDOW);
    (1..=req.budgets)
        .map(|k| {
            let budget = top * k as f64 / req.budgets as f64;
            let region = best_region(&dist, budget)?;
            let report = verify_local(&f, &region, &g, &rule)?;
            Ok(SweepRow {
                budget,
                measure: report.measure.unwrap_or(budget),
                lhs: report.lhs,
                rhs: report.rhs,
                pass: report.pass,
            })
        })
        .collect()
}

fn run<Q: for<'de> Deserialize<'de>, A: Serialize>(request: &str, op: impl Fn(&Q) -> Result<A>) -> Result<String> {
    let req: Q = serde_json::from_str(request)?;
    Ok(serde_json::to_string(&op(&req)?)?)
}

/// JSON in, JSON out.
pub fn distribution_curves_json(request: &str) -> Result<String> {
    run(request, distribution_curves)
}

pub fn modulus_heatmap_json(request: &str) -> Result<String> {
    run(request, modulus_heatmap)
}

pub fn faber_krahn_sweep_json(request: &str) -> Result<String> {
    run(request, faber_krahn_sweep)
}

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::*;

    fn js(r: super::Result<String>) -> Result<String, JsError> {
        r.map_err(|e| JsError::new(&e.to_string()))
    }

    #[wasm_bindgen(js_name = distributionCurves)]
    pub fn distribution_curves(request: &str) -> Result<String, JsError> {
        js(super::distribution_curves_json(request))
    }

    #[wasm_bindgen(js_name = modulusHeatmap)]
    pub fn modulus_heatmap(request: &str) -> Result<String, JsError> {
        js(super::modulus_heatmap_json(request))
    }

    #[wasm_bindgen(js_name = faberKrahnSweep)]
    pub fn faber_krahn_sweep(request: &str) -> Result<String, JsError> {
        js(super::faber_krahn_sweep_json(request))
    }
}
