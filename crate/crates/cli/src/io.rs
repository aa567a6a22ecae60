//! Reading documents by schema and writing JSON or CSV.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use riemann_sampling::coherent::SpinState;
use riemann_sampling::euler::EulerSamples;
use riemann_sampling::multispin::{BandLimitedState, MultiSampleVector};
use riemann_sampling::singlespin::SampleVector;
use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    State(SpinState),
    Band(BandLimitedState),
    Samples(SampleVector),
    MultiSamples(MultiSampleVector),
    Euler(EulerSamples),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::State(_) => "spin state",
            Document::Band(_) => "band-limited state",
            Document::Samples(_) => "sample vector",
            Document::MultiSamples(_) => "multi-spin sample vector",
            Document::Euler(_) => "Euler samples",
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            Document::State(d) => json_line(d),
            Document::Band(d) => json_line(d),
            Document::Samples(d) => json_line(d),
            Document::MultiSamples(d) => json_line(d),
            Document::Euler(d) => json_line(d),
        }
    }

    /// The vector payload, for CSV output.
    pub fn values(&self) -> &[Complex64] {
        match self {
            Document::State(d) => d.coeffs(),
            Document::Band(d) => d.coeffs(),
            Document::Samples(d) => d.values(),
            Document::MultiSamples(d) => d.values(),
            Document::Euler(d) => d.values(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => {
                let mut table = Table::new(&["index", "re", "im"]);
                for (i, v) in self.values().iter().enumerate() {
                    table.row(vec![i.to_string(), num(v.re), num(v.im)]);
                }
                table.finish()
            }
        }
    }
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("documents serialize");
    s.push('\n');
    s
}

fn parse<T: serde::de::DeserializeOwned>(value: Value, path: &Path) -> CliResult<T> {
    serde_json::from_value(value).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Read a JSON document and pick its type from the keys present.
pub fn read_document(path: &Path) -> CliResult<Document> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let obj = value
        .as_object()
        .ok_or_else(|| CliError::input(format!("{}: expected a JSON object", path.display())))?;
    let has = |k: &str| obj.contains_key(k);
    if has("coeffs") && has("two_s") {
        Ok(Document::State(parse(value, path)?))
    } else if has("coeffs") && has("J") {
        Ok(Document::Band(parse(value, path)?))
    } else if has("values") && has("two_s") {
        Ok(Document::Samples(parse(value, path)?))
    } else if has("values") && has("J") {
        Ok(Document::MultiSamples(parse(value, path)?))
    } else if has("values") && has("theta0") {
        Ok(Document::Euler(parse(value, path)?))
    } else {
        Err(CliError::input(format!(
            "{}: not a spin state, band-limited state, sample vector or Euler sample file",
            path.display()
        )))
    }
}

/// Write to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::input(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Table {
    out: String,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut out = header.join(",");
        out.push('\n');
        Self { out }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}
