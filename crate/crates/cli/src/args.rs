use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use wehrl_lab::{Complex64, ConvexWeight, Geometry};

#[derive(Debug, Parser)]
#[command(name = "wehrl-lab", version, about = "Sharp concentration inequalities for coherent-state spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check one inequality for every function of the source.
    Verify {
        #[arg(value_enum)]
        inequality: Inequality,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Distribution function `mu(t)` as CSV (t, mu, mu0).
    Distribution {
        #[command(flatten)]
        run: RunArgs,
        /// Number of t values.
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Monotonicity records `D(t1, t2, mu(t2)) <= mu(t1)`.
    CompareOde {
        #[command(flatten)]
        run: RunArgs,
        /// Number of random (t1, t2) pairs per function.
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        /// Explicit pair `t1,t2`; repeatable. Replaces the random pairs.
        #[arg(long = "pair", value_parser = parse_pair)]
        explicit: Vec<(f64, f64)>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Inequality {
    Wehrl,
    Global,
    Contractivity,
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["coeffs", "coherent", "coherent_su2", "seed"])))]
pub struct RunArgs {
    #[arg(long, value_parser = parse_geometry)]
    pub space: Geometry,
    /// Degree of the sphere space.
    #[arg(long)]
    pub j: Option<u32>,
    /// Weight parameter of the Fock and Bergman spaces.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Second exponent of the contractivity check.
    #[arg(long)]
    pub q: Option<f64>,
    /// Convex weight: power:s, xlogx, hinge:lambda or table:x:y,...; repeatable.
    #[arg(long = "G", value_name = "WEIGHT")]
    pub g: Vec<ConvexWeight>,

    /// JSON file with coefficients `[[re, im], ...]`, lowest degree first.
    #[arg(long, value_name = "FILE")]
    pub coeffs: Option<PathBuf>,
    /// Fock or Bergman coherent state at `re,im`.
    #[arg(long, value_name = "RE,IM", value_parser = parse_point)]
    pub coherent: Option<Complex64>,
    /// Sphere coherent state for the unit vector `(alpha, beta)`.
    #[arg(long = "coherent-su2", value_name = "ARE,AIM,BRE,BIM", value_parser = parse_su2)]
    pub coherent_su2: Option<(Complex64, Complex64)>,
    /// Seed of a random sweep.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Functions in a random sweep.
    #[arg(long, default_value_t = 10, requires = "seed")]
    pub count: usize,
    /// Degree of random Fock and Bergman functions (sphere functions have degree j).
    #[arg(long, requires = "seed")]
    pub degree: Option<usize>,

    #[arg(long)]
    pub radial_order: Option<usize>,
    #[arg(long)]
    pub angular_order: Option<usize>,

    /// Measure of the region in the local check.
    #[arg(long)]
    pub budget: Option<f64>,
    /// Centre of a geodesic disk of measure `budget`; the superlevel set is used otherwise.
    #[arg(long, value_name = "RE,IM", value_parser = parse_point, requires = "budget")]
    pub disk: Option<Complex64>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_geometry(s: &str) -> Result<Geometry, String> {
    s.parse().map_err(|e: wehrl_lab::Error| e.to_string())
}

fn numbers(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated numbers, got {}", v.len()));
    }
    Ok(v)
}

fn parse_point(s: &str) -> Result<Complex64, String> {
    let v = numbers(s, 2)?;
    Ok(Complex64::new(v[0], v[1]))
}

fn parse_su2(s: &str) -> Result<(Complex64, Complex64), String> {
    let v = numbers(s, 4)?;
    Ok((Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3])))
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let v = numbers(s, 2)?;
    Ok((v[0], v[1]))
}
