//! CSV and JSON writers for decay curves, and the 12-significant-digit
//! number format used for everything printed.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use avgcorr::correlation::{Method, GENERATOR, INITIAL_NODES, RELATIVE_TOLERANCE};
use avgcorr::sweep::DecayCurve;
use serde::Serialize;

pub const CSV_HEADER: &str = "gamma,t,p,alpha,beta,gamma_sv,sigma,classification";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Formats `v` positionally with 12 significant digits, e.g. `0.500000000000`.
pub fn sig12(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0.00000000000".to_string();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();

    let mut out = String::with_capacity(digits.len() + 8);
    if negative {
        out.push('-');
    }
    if exp < 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
        out.push_str(&digits);
    } else {
        let int_len = exp as usize + 1;
        if int_len >= digits.len() {
            out.push_str(&digits);
            out.extend(std::iter::repeat_n('0', int_len - digits.len()));
        } else {
            out.push_str(&digits[..int_len]);
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    }
    out
}

/// Run parameters echoed into the JSON metadata block.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub channel: String,
    pub c: f64,
    pub t_max: f64,
    pub steps: usize,
    pub method: &'static str,
    pub seed: u64,
    pub samples: Option<usize>,
    pub initial_nodes: usize,
    pub node_count: usize,
    pub relative_tolerance: f64,
    pub generator: &'static str,
}

impl Metadata {
    pub fn for_curve(curve: &DecayCurve, seed: u64) -> Self {
        let spec = &curve.spec;
        let samples = match spec.method {
            Method::MonteCarlo { samples, .. } => Some(samples),
            _ => None,
        };
        Metadata {
            channel: spec.channel.to_string(),
            c: spec.c.value(),
            t_max: spec.t_max,
            steps: spec.steps,
            method: spec.method.name(),
            seed,
            samples,
            initial_nodes: INITIAL_NODES,
            node_count: curve.max_evaluations(),
            relative_tolerance: RELATIVE_TOLERANCE,
            generator: GENERATOR,
        }
    }
}

#[derive(Serialize)]
struct JsonRow {
    t: f64,
    p: f64,
    alpha: f64,
    beta: f64,
    gamma_sv: f64,
    sigma: f64,
    classification: &'static str,
}

#[derive(Serialize)]
struct JsonBlock {
    gamma: f64,
    rows: Vec<JsonRow>,
}

#[derive(Serialize)]
struct JsonCurve {
    metadata: Metadata,
    blocks: Vec<JsonBlock>,
}

pub fn write_csv<W: Write>(curve: &DecayCurve, mut w: W) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for (gamma, r) in curve.rows() {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            sig12(gamma),
            sig12(r.t),
            sig12(r.p),
            sig12(r.alpha),
            sig12(r.beta),
            sig12(r.gamma_sv),
            sig12(r.sigma),
            r.classification
        )?;
    }
    w.flush()
}

pub fn write_json<W: Write>(curve: &DecayCurve, seed: u64, mut w: W) -> io::Result<()> {
    let doc = JsonCurve {
        metadata: Metadata::for_curve(curve, seed),
        blocks: curve
            .blocks
            .iter()
            .map(|b| JsonBlock {
                gamma: b.gamma,
                rows: b
                    .rows
                    .iter()
                    .map(|r| JsonRow {
                        t: r.t,
                        p: r.p,
                        alpha: r.alpha,
                        beta: r.beta,
                        gamma_sv: r.gamma_sv,
                        sigma: r.sigma,
                        classification: r.classification.as_str(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)?;
    w.flush()
}

/// Writes `curve` to `path`, or to stdout when `path` is `None`.
pub fn write_output(curve: &DecayCurve, format: Format, seed: u64, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(path) => {
            let file = BufWriter::new(File::create(path)?);
            match format {
                Format::Csv => write_csv(curve, file),
                Format::Json => write_json(curve, seed, file),
            }
        }
        None => {
            let stdout = io::stdout().lock();
            match format {
                Format::Csv => write_csv(curve, stdout),
                Format::Json => write_json(curve, seed, stdout),
            }
        }
    }
}
