use serde::{Serialize, Serializer};

use super::regions::Region;
use super::weights::ConvexWeight;
use crate::spaces::SpaceParams;
use crate::tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The bound holds with room to spare.
    Strict,
    /// The bound holds with margin below the equality threshold.
    Equality,
    Fail,
    /// Both sides are `-inf`.
    BothDivergent,
}

/// One checked inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub inequality: String,
    pub space: SpaceParams,
    #[serde(rename = "G")]
    pub g: Option<ConvexWeight>,
    #[serde(serialize_with = "ser_number")]
    pub lhs: f64,
    #[serde(serialize_with = "ser_number")]
    pub rhs: f64,
    #[serde(serialize_with = "ser_number")]
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(serialize_with = "ser_number")]
    pub equality_diagnostic: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<Region>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<f64>,
}

impl VerificationReport {
    /// Fills margin, pass flag and verdict from the two sides.
    pub(crate) fn new(
        inequality: &str,
        space: SpaceParams,
        g: Option<ConvexWeight>,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        equality_diagnostic: f64,
    ) -> Self {
        let (margin, pass, verdict) = if lhs == f64::NEG_INFINITY && rhs == f64::NEG_INFINITY {
            (0.0, true, Verdict::BothDivergent)
        } else {
            let margin = rhs - lhs;
            let pass = margin >= -tolerance;
            let verdict = if !pass {
                Verdict::Fail
            } else if margin <= tolerances::EQUALITY_MARGIN {
                Verdict::Equality
            } else {
                Verdict::Strict
            };
            (margin, pass, verdict)
        };
        VerificationReport {
            inequality: inequality.to_string(),
            space,
            g,
            lhs,
            rhs,
            margin,
            tolerance,
            pass,
            equality_diagnostic,
            verdict,
            q: None,
            region: None,
            measure: None,
        }
    }
}

/// Finite numbers as JSON numbers; infinities as the strings `"-inf"`/`"inf"`.
fn ser_number<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if *v == f64::NEG_INFINITY {
        s.serialize_str("-inf")
    } else if *v == f64::INFINITY {
        s.serialize_str("inf")
    } else {
        s.serialize_str("nan")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> SpaceParams {
        SpaceParams::SpherePoly { j: 2, p: 2.0 }
    }

    #[test]
    fn verdicts() {
        let r = VerificationReport::new("global", space(), None, 0.5, 0.6, 1e-6, 0.1);
        assert!(r.pass && r.verdict == Verdict::Strict);
        let r = VerificationReport::new("global", space(), None, 0.5, 0.5 + 1e-7, 1e-6, 0.0);
        assert!(r.pass && r.verdict == Verdict::Equality);
        let r = VerificationReport::new("global", space(), None, 0.6, 0.5, 1e-6, 0.0);
        assert!(!r.pass && r.verdict == Verdict::Fail);
        let r = VerificationReport::new("global", space(), None, f64::NEG_INFINITY, f64::NEG_INFINITY, 1e-6, 0.0);
        assert!(r.pass && r.verdict == Verdict::BothDivergent);
    }

    #[test]
    fn json_schema() {
        let r = VerificationReport::new(
            "global",
            space(),
            Some(ConvexWeight::Power(2.0)),
            f64::NEG_INFINITY,
            0.25,
            1e-6,
            0.0,
        );
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["inequality", "space", "G", "lhs", "rhs", "margin", "tolerance", "pass", "equality_diagnostic"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["lhs"], "-inf");
        assert_eq!(v["margin"], "inf");
        assert_eq!(v["space"]["geometry"], "sphere");
        assert_eq!(v["G"]["kind"], "power");
        assert!(v.get("q").is_none());
    }
}
