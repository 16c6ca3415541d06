use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use wehrl_lab::spaces::{random_functions, DEFAULT_RANDOM_DEGREE};
use wehrl_lab::{Coherent, Complex64, Geometry, QuadratureRule, SpaceParams, WeightedFunction};

use crate::args::RunArgs;

pub fn space(args: &RunArgs) -> Result<SpaceParams> {
    let space = match args.space {
        Geometry::Sphere => {
            let j = args.j.context("--j is required for the sphere")?;
            SpaceParams::SpherePoly { j, p: args.p }
        }
        Geometry::Plane => {
            let alpha = args.alpha.context("--alpha is required for the plane")?;
            SpaceParams::Fock { alpha, p: args.p }
        }
        Geometry::HyperbolicDisk => {
            let alpha = args.alpha.context("--alpha is required for the hyperbolic disk")?;
            SpaceParams::Bergman { alpha, p: args.p }
        }
    };
    space.validate()?;
    Ok(space)
}

/// Rule for `f`, honouring the order overrides.
pub fn rule(args: &RunArgs, f: &WeightedFunction) -> Result<QuadratureRule> {
    Ok(match orders(args, f) {
        Some((n_r, n_theta)) => QuadratureRule::build(f.space(), n_r, n_theta)?,
        None => f.default_rule()?,
    })
}

/// Explicit orders for `f`, or `None` when neither override is given.
pub fn orders(args: &RunArgs, f: &WeightedFunction) -> Option<(usize, usize)> {
    match (args.radial_order, args.angular_order) {
        (None, None) => None,
        (r, a) => Some((
            r.unwrap_or(wehrl_lab::quadrature::DEFAULT_RADIAL_ORDER),
            a.unwrap_or_else(|| wehrl_lab::quadrature::default_angular_order(f.effective_degree())),
        )),
    }
}

/// Functions under test, normalized in `space`.
pub fn functions(args: &RunArgs, space: SpaceParams) -> Result<Vec<WeightedFunction>> {
    if let Some(path) = &args.coeffs {
        let coeffs = read_coefficients(path)?;
        let f = WeightedFunction::from_coefficients(space, coeffs)?;
        let rule = rule(args, &f)?;
        return Ok(vec![f.normalize_with(&rule)?]);
    }
    if let Some(a) = args.coherent {
        return Ok(vec![WeightedFunction::coherent_state(space, Coherent::Point(a))?]);
    }
    if let Some((alpha, beta)) = args.coherent_su2 {
        return Ok(vec![WeightedFunction::coherent_state(space, Coherent::Su2 { alpha, beta })?]);
    }
    let seed = args.seed.ok_or_else(|| anyhow!("no function source given"))?;
    if args.count == 0 {
        bail!("--count must be positive");
    }
    let degree = args.degree.unwrap_or(DEFAULT_RANDOM_DEGREE);
    Ok(random_functions(space, degree, args.count, seed)?)
}

/// `[[re, im], ...]`; parse errors carry the file name, line and column.
pub fn read_coefficients(path: &Path) -> Result<Vec<Complex64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_coefficients(&text).map_err(|e| anyhow!("{}:{e}", path.display()))
}

fn parse_coefficients(text: &str) -> std::result::Result<Vec<Complex64>, String> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text)
        .map_err(|e| {
            let msg = e.to_string();
            let msg = msg.split(" at line ").next().unwrap_or_default();
            format!("{}:{}: {msg}", e.line(), e.column())
        })?;
    if pairs.is_empty() {
        return Err("1:1: empty coefficient list".into());
    }
    Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
}
