//! Convex weights `G` with `G(0) = 0`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{config, Error, Result};
use crate::tolerances;

#[derive(Debug, Clone, PartialEq)]
pub enum ConvexWeight {
    /// `x^s`, `s >= 1`.
    Power(f64),
    /// `x ln x`.
    XLogX,
    /// `max(x - lambda, 0)`, `0 < lambda < 1`.
    Hinge(f64),
    /// Piecewise linear through the given points, extended linearly past the
    /// last one.
    Tabulated(Tabulated),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Tabulated {
    /// Points must start at `(0, 0)` with strictly increasing abscissae and
    /// non-decreasing slopes.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(config("a tabulated weight needs at least two points"));
        }
        if points[0] != (0.0, 0.0) {
            return Err(config("a tabulated weight must start at (0, 0)"));
        }
        if points.iter().any(|(x, y)| !(x.is_finite() && y.is_finite())) {
            return Err(config("tabulated points must be finite"));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(config("tabulated abscissae must increase strictly"));
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
        let table = Tabulated { xs, ys };
        let slopes = table.slopes();
        if slopes.windows(2).any(|w| w[1] < w[0] - tolerances::CONVEXITY_SLACK) {
            return Err(config("tabulated weight is not convex"));
        }
        Ok(table)
    }

    fn slopes(&self) -> Vec<f64> {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
            .collect()
    }

    fn segment(&self, x: f64) -> usize {
        let k = self.xs.partition_point(|v| *v <= x);
        k.saturating_sub(1).min(self.xs.len() - 2)
    }

    fn eval(&self, x: f64) -> f64 {
        let k = self.segment(x);
        let slope = (self.ys[k + 1] - self.ys[k]) / (self.xs[k + 1] - self.xs[k]);
        self.ys[k] + slope * (x - self.xs[k])
    }

    fn derivative(&self, x: f64) -> f64 {
        let k = self.segment(x);
        (self.ys[k + 1] - self.ys[k]) / (self.xs[k + 1] - self.xs[k])
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }
}

impl ConvexWeight {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ConvexWeight::Power(s) if s >= 1.0 && s.is_finite() => Ok(()),
            ConvexWeight::Power(s) => Err(config(format!("power weight needs s >= 1, got {s}"))),
            ConvexWeight::Hinge(l) if l > 0.0 && l < 1.0 => Ok(()),
            ConvexWeight::Hinge(l) => {
                Err(config(format!("hinge weight needs 0 < lambda < 1, got {l}")))
            }
            _ => Ok(()),
        }
    }

    /// `G(x)` for `x >= 0`.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            ConvexWeight::Power(s) => {
                if *s == 1.0 {
                    x
                } else if *s == 2.0 {
                    x * x
                } else {
                    x.powf(*s)
                }
            }
            ConvexWeight::XLogX => {
                if x < tolerances::XLOGX_CUTOFF {
                    0.0
                } else {
                    x * x.ln()
                }
            }
            ConvexWeight::Hinge(l) => (x - l).max(0.0),
            ConvexWeight::Tabulated(t) => t.eval(x),
        }
    }

    /// `G'(x)` (right derivative at kinks).
    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            ConvexWeight::Power(s) => s * x.powf(s - 1.0),
            ConvexWeight::XLogX => x.ln() + 1.0,
            ConvexWeight::Hinge(l) => {
                if x >= *l {
                    1.0
                } else {
                    0.0
                }
            }
            ConvexWeight::Tabulated(t) => t.derivative(x),
        }
    }

    /// Points where `G` is not differentiable.
    pub fn kinks(&self) -> Vec<f64> {
        match self {
            ConvexWeight::Hinge(l) => vec![*l],
            ConvexWeight::Tabulated(t) => t.xs[1..t.xs.len() - 1].to_vec(),
            _ => Vec::new(),
        }
    }

    /// Whether `G(x) > 0` for every `x > 0`.
    pub fn positive_on_positive_axis(&self) -> bool {
        match self {
            ConvexWeight::Power(_) => true,
            ConvexWeight::XLogX | ConvexWeight::Hinge(_) => false,
            // Convex with G(0) = 0: positive everywhere iff positive at the first node.
            ConvexWeight::Tabulated(t) => t.ys[1] > 0.0,
        }
    }

    pub fn is_linear(&self) -> bool {
        match self {
            ConvexWeight::Power(s) => *s == 1.0,
            ConvexWeight::Tabulated(t) => {
                let s = t.slopes();
                s.iter().all(|v| (v - s[0]).abs() <= tolerances::CONVEXITY_SLACK)
            }
            _ => false,
        }
    }

    /// Midpoint convexity on a uniform grid of `[0, upper]`.
    pub fn check_convexity(&self, upper: f64, points: usize) -> Result<()> {
        let h = upper / points as f64;
        for k in 1..points {
            let x = k as f64 * h;
            let mid = self.eval(x);
            let chord = 0.5 * (self.eval(x - h) + self.eval(x + h));
            if chord - mid < -tolerances::CONVEXITY_SLACK * (1.0 + mid.abs()) {
                return Err(config(format!("weight {self} fails midpoint convexity at x = {x}")));
            }
        }
        if self.eval(0.0) != 0.0 {
            return Err(config(format!("weight {self} has G(0) != 0")));
        }
        Ok(())
    }
}

impl fmt::Display for ConvexWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvexWeight::Power(s) => write!(f, "power:{s}"),
            ConvexWeight::XLogX => f.write_str("xlogx"),
            ConvexWeight::Hinge(l) => write!(f, "hinge:{l}"),
            ConvexWeight::Tabulated(t) => write!(f, "tabulated({} points)", t.xs.len()),
        }
    }
}

impl FromStr for ConvexWeight {
    type Err = Error;

    /// `power:s`, `xlogx`, `hinge:lambda`, or `table:x1:y1,x2:y2,...` (the
    /// origin is implied).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k.to_ascii_lowercase(), Some(a)),
            None => (s.to_ascii_lowercase(), None),
        };
        let number = |a: Option<&str>| -> Result<f64> {
            a.ok_or_else(|| config(format!("weight '{s}' needs a parameter")))?
                .trim()
                .parse::<f64>()
                .map_err(|e| config(format!("bad parameter in weight '{s}': {e}")))
        };
        let g = match (kind.as_str(), arg) {
            ("power", a) => ConvexWeight::Power(number(a)?),
            ("xlogx", None) => ConvexWeight::XLogX,
            ("hinge", a) => ConvexWeight::Hinge(number(a)?),
            ("table", Some(a)) => {
                let mut points = vec![(0.0, 0.0)];
                for pair in a.split(',') {
                    let (x, y) = pair
                        .split_once(':')
                        .ok_or_else(|| config(format!("table entry '{pair}' is not x:y")))?;
                    let parse = |v: &str| {
                        v.trim().parse::<f64>().map_err(|e| config(format!("table entry '{pair}': {e}")))
                    };
                    points.push((parse(x)?, parse(y)?));
                }
                ConvexWeight::Tabulated(Tabulated::new(points)?)
            }
            _ => {
                return Err(config(format!(
                    "unknown weight '{s}' (expected power:s, xlogx, hinge:lambda or table:...)"
                )))
            }
        };
        g.validate()?;
        Ok(g)
    }
}

impl Serialize for ConvexWeight {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(None)?;
        match self {
            ConvexWeight::Power(s) => {
                map.serialize_entry("kind", "power")?;
                map.serialize_entry("s", s)?;
            }
            ConvexWeight::XLogX => map.serialize_entry("kind", "xlogx")?,
            ConvexWeight::Hinge(l) => {
                map.serialize_entry("kind", "hinge")?;
                map.serialize_entry("lambda", l)?;
            }
            ConvexWeight::Tabulated(t) => {
                map.serialize_entry("kind", "tabulated")?;
                let pts: Vec<[f64; 2]> = t.points().map(|(x, y)| [x, y]).collect();
                map.serialize_entry("points", &pts)?;
            }
        }
        map.end()
    }
}
