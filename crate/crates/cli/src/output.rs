use std::fs::File;
use std::io::{BufWriter, Write};

use anyhow::{Context, Result};
use serde::Serialize;
use wehrl_lab::{SpaceParams, VerificationReport};

use crate::args::{Format, RunArgs};

/// First record of every output, carrying what is needed to reproduce the run.
#[derive(Debug, Serialize)]
pub struct Header {
    record: &'static str,
    tool: &'static str,
    version: &'static str,
    command: String,
    space: SpaceParams,
    source: &'static str,
    seed: Option<u64>,
    functions: usize,
    radial_order: Option<usize>,
    angular_order: Option<usize>,
}

impl Header {
    pub fn new(command: &str, args: &RunArgs, space: SpaceParams, functions: usize) -> Self {
        let source = if args.coeffs.is_some() {
            "coeffs"
        } else if args.coherent.is_some() || args.coherent_su2.is_some() {
            "coherent"
        } else {
            "random"
        };
        Header {
            record: "header",
            tool: "wehrl-lab",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            space,
            source,
            seed: args.seed,
            functions,
            radial_order: args.radial_order,
            angular_order: args.angular_order,
        }
    }
}

#[derive(Serialize)]
struct ReportLine<'a> {
    f: usize,
    #[serde(flatten)]
    report: &'a VerificationReport,
}

#[derive(Serialize)]
struct ReportRow {
    f: usize,
    inequality: String,
    #[serde(rename = "G")]
    g: String,
    q: Option<f64>,
    lhs: String,
    rhs: String,
    margin: String,
    tolerance: f64,
    pass: bool,
    verdict: String,
    equality_diagnostic: String,
    measure: Option<f64>,
}

fn number(v: f64) -> String {
    match v {
        f64::NEG_INFINITY => "-inf".into(),
        f64::INFINITY => "inf".into(),
        v if v.is_nan() => "nan".into(),
        v => v.to_string(),
    }
}

enum Writer {
    Json(Box<dyn Write>),
    Csv(csv::Writer<Box<dyn Write>>),
}

pub struct Sink {
    writer: Writer,
}

impl Sink {
    pub fn open(args: &RunArgs, default: Format, header: &Header) -> Result<Self> {
        let mut out: Box<dyn Write> = match &args.out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("creating {}", path.display()))?,
            )),
            None => Box::new(BufWriter::new(std::io::stdout().lock())),
        };
        let head = serde_json::to_string(header)?;
        let writer = match args.format.unwrap_or(default) {
            Format::Json => {
                writeln!(out, "{head}")?;
                Writer::Json(out)
            }
            Format::Csv => {
                writeln!(out, "# {head}")?;
                Writer::Csv(csv::Writer::from_writer(out))
            }
        };
        Ok(Sink { writer })
    }

    pub fn row<T: Serialize>(&mut self, row: &T) -> Result<()> {
        match &mut self.writer {
            Writer::Json(out) => {
                serde_json::to_writer(&mut *out, row)?;
                writeln!(out)?;
            }
            Writer::Csv(w) => w.serialize(row)?,
        }
        Ok(())
    }

    pub fn report(&mut self, f: usize, report: &VerificationReport) -> Result<()> {
        match &mut self.writer {
            Writer::Json(_) => self.row(&ReportLine { f, report }),
            Writer::Csv(w) => {
                w.serialize(ReportRow {
                    f,
                    inequality: report.inequality.clone(),
                    g: report.g.as_ref().map(ToString::to_string).unwrap_or_default(),
                    q: report.q,
                    lhs: number(report.lhs),
                    rhs: number(report.rhs),
                    margin: number(report.margin),
                    tolerance: report.tolerance,
                    pass: report.pass,
                    verdict: serde_json::to_value(report.verdict)?.as_str().unwrap_or_default().to_string(),
                    equality_diagnostic: number(report.equality_diagnostic),
                    measure: report.measure,
                })?;
                Ok(())
            }
        }
    }

    pub fn finish(self) -> Result<()> {
        match self.writer {
            Writer::Json(mut out) => out.flush()?,
            Writer::Csv(mut w) => w.flush()?,
        }
        Ok(())
    }
}
