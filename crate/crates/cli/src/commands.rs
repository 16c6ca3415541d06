use anyhow::{bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use wehrl_lab::comparison::{check_monotonicity, MonotonicityRecord};
use wehrl_lab::inequalities::{
    best_region, verify_contractivity_at, verify_global, verify_local, verify_wehrl,
};
use wehrl_lab::{
    tolerances, ComparisonCurve, EmpiricalDistribution, Region, SpaceParams, VerificationReport,
    WeightedFunction,
};

use crate::args::{Format, Inequality, RunArgs};
use crate::output::{Header, Sink};
use crate::source;

/// A function under test with its rule, normalized on that rule.
struct Prepared {
    f: WeightedFunction,
    rule: wehrl_lab::QuadratureRule,
}

fn prepare(args: &RunArgs) -> Result<(SpaceParams, Vec<Prepared>)> {
    let space = source::space(args)?;
    let prepared = source::functions(args, space)?
        .into_par_iter()
        .map(|f| {
            let rule = source::rule(args, &f)?;
            let f = f.normalize_with(&rule)?;
            Ok(Prepared { f, rule })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((space, prepared))
}

fn weights(args: &RunArgs) -> Result<&[wehrl_lab::ConvexWeight]> {
    if args.g.is_empty() {
        bail!("at least one --G weight is required");
    }
    Ok(&args.g)
}

/// Runs one check per function and weight. Returns whether every report passed.
pub fn verify(inequality: Inequality, args: &RunArgs) -> Result<bool> {
    let (space, prepared) = prepare(args)?;
    let name = match inequality {
        Inequality::Wehrl => "wehrl",
        Inequality::Global => "global",
        Inequality::Contractivity => "contractivity",
        Inequality::Local => "local",
    };
    let gs = match inequality {
        Inequality::Global | Inequality::Local => weights(args)?.to_vec(),
        _ => Vec::new(),
    };
    let q = match inequality {
        Inequality::Contractivity => Some(args.q.context("--q is required for contractivity")?),
        _ => None,
    };
    let budget = match inequality {
        Inequality::Local => Some(args.budget.context("--budget is required for the local check")?),
        _ => None,
    };
    let per_function: Vec<Vec<VerificationReport>> = prepared
        .par_iter()
        .map(|Prepared { f, rule }| -> Result<Vec<VerificationReport>> {
            match inequality {
                Inequality::Wehrl => Ok(vec![verify_wehrl(f, rule)?]),
                Inequality::Contractivity => {
                    Ok(vec![verify_contractivity_at(f, q.expect("checked"), source::orders(args, f))?])
                }
                Inequality::Global => gs.iter().map(|g| Ok(verify_global(f, g, rule)?)).collect(),
                Inequality::Local => {
                    let budget = budget.expect("checked");
                    let region = match args.disk {
                        Some(center) => Region::GeodesicDisk { center, measure: budget },
                        None => best_region(&EmpiricalDistribution::build(f, rule)?, budget)?,
                    };
                    gs.iter().map(|g| Ok(verify_local(f, &region, g, rule)?)).collect()
                }
            }
        })
        .collect::<Result<_>>()?;

    let mut sink = Sink::open(args, Format::Json, &Header::new(&format!("verify {name}"), args, space, prepared.len()))?;
    let mut all_pass = true;
    for (i, reports) in per_function.iter().enumerate() {
        for r in reports {
            all_pass &= r.pass;
            sink.report(i, r)?;
        }
    }
    sink.finish()?;
    Ok(all_pass)
}

#[derive(Serialize)]
struct DistributionRow {
    f: usize,
    t: f64,
    mu: f64,
    mu0: f64,
}

/// `mu` on a uniform t grid from the level where `mu` reaches the crossing
/// window (or nearly the whole sphere) up to the level where it falls to
/// the floor.
pub fn distribution(args: &RunArgs, points: usize) -> Result<()> {
    if points == 0 {
        bail!("--points must be positive");
    }
    let (space, prepared) = prepare(args)?;
    let curve = ComparisonCurve::for_space(&space)?;
    let rows: Vec<Vec<DistributionRow>> = prepared
        .par_iter()
        .enumerate()
        .map(|(i, Prepared { f, rule })| -> Result<Vec<DistributionRow>> {
            let dist = EmpiricalDistribution::build(f, rule)?;
            let mass = dist.total_mass();
            let t_hi = dist.rearrangement(tolerances::MU_FLOOR)?;
            let t_lo = dist.rearrangement(tolerances::CROSSING_WINDOW.min(0.999 * mass))?;
            let ts: Vec<f64> = if points == 1 || t_hi <= t_lo {
                vec![t_hi]
            } else {
                // The last point is t_hi itself so rounding cannot push it past the floor.
                (0..points)
                    .map(|k| if k + 1 == points { t_hi } else { t_lo + (t_hi - t_lo) * k as f64 / (points - 1) as f64 })
                    .collect()
            };
            Ok(ts
                .into_iter()
                .map(|t| DistributionRow { f: i, t, mu: dist.mu_at(t), mu0: curve.mu0(t) })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut sink = Sink::open(args, Format::Csv, &Header::new("distribution", args, space, prepared.len()))?;
    for row in rows.iter().flatten() {
        sink.row(row)?;
    }
    sink.finish()
}

#[derive(Serialize)]
struct OdeRow {
    f: usize,
    t1: f64,
    t2: f64,
    mu_t2: f64,
    #[serde(rename = "D")]
    d: f64,
    mu_t1: f64,
    margin: f64,
    pass: bool,
}

impl OdeRow {
    fn new(f: usize, r: &MonotonicityRecord) -> Self {
        OdeRow { f, t1: r.t1, t2: r.t2, mu_t2: r.mu_t2, d: r.d, mu_t1: r.mu_t1, margin: r.margin, pass: r.pass }
    }
}

/// Pairs `t1 < t2 < t0` with `mu(t2) >= MU_FLOOR`, drawn in the measure variable.
fn random_pairs(dist: &EmpiricalDistribution, rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<(f64, f64)>> {
    let s_max = dist.total_mass().min(tolerances::CROSSING_WINDOW) * 0.999;
    let s2_max = 0.9 * s_max.min(1.0);
    let mut pairs = Vec::with_capacity(n);
    let mut attempts = 0;
    while pairs.len() < n {
        attempts += 1;
        if attempts > 100 * n + 100 {
            bail!("could not draw {n} pairs with mu(t2) >= {}", tolerances::MU_FLOOR);
        }
        let s2 = rng.random_range(2.0 * tolerances::MU_FLOOR..s2_max);
        let s1 = rng.random_range(s2..s_max);
        let (t2, t1) = (dist.rearrangement(s2)?, dist.rearrangement(s1)?);
        if t1 < t2 && t2 < dist.t0() && dist.mu_at(t2) >= tolerances::MU_FLOOR {
            pairs.push((t1, t2));
        }
    }
    Ok(pairs)
}

/// Returns whether every pair passed.
pub fn compare_ode(args: &RunArgs, pairs: usize, explicit: &[(f64, f64)]) -> Result<bool> {
    if explicit.is_empty() && pairs == 0 {
        bail!("--pairs must be positive");
    }
    let (space, prepared) = prepare(args)?;
    let curve = ComparisonCurve::for_space(&space)?;
    let seed = args.seed.unwrap_or(0);
    let records: Vec<Vec<MonotonicityRecord>> = prepared
        .par_iter()
        .enumerate()
        .map(|(i, Prepared { f, rule })| -> Result<Vec<MonotonicityRecord>> {
            let dist = EmpiricalDistribution::build(f, rule)?;
            let ts = if explicit.is_empty() {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64 + 1);
                random_pairs(&dist, &mut rng, pairs)?
            } else {
                explicit.to_vec()
            };
            Ok(check_monotonicity(&dist, &curve, &ts, tolerances::DISTRIBUTION_VERDICT)?)
        })
        .collect::<Result<_>>()?;
    let mut sink = Sink::open(args, Format::Json, &Header::new("compare-ode", args, space, prepared.len()))?;
    let mut all_pass = true;
    for (i, recs) in records.iter().enumerate() {
        for record in recs {
            all_pass &= record.pass;
            sink.row(&OdeRow::new(i, record))?;
        }
    }
    sink.finish()?;
    Ok(all_pass)
}
