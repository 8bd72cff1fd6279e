use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::BenchConfig;
use crate::error::{BenchError, Result};
use crate::sweep::DecayCurve;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// JSON results document: the configuration echo followed by the curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: BenchConfig,
    #[serde(flatten)]
    pub curve: DecayCurve,
}

pub fn to_csv(curve: &DecayCurve) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &curve.rows {
        w.serialize(row).expect("rows serialize");
    }
    if curve.rows.is_empty() {
        w.write_record(["dt", "n_ops", "rel_error", "flags"]).expect("header writes");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("CSV is UTF-8")
}

pub fn to_json(config: &BenchConfig, curve: &DecayCurve) -> String {
    let report = Report {
        config: config.clone(),
        curve: curve.clone(),
    };
    serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
}

pub fn render(config: &BenchConfig, curve: &DecayCurve, format: Format) -> String {
    match format {
        Format::Csv => to_csv(curve),
        Format::Json => to_json(config, curve),
    }
}

/// Write to `path`, or to standard output when `path` is `None`.
pub fn emit_results(config: &BenchConfig, curve: &DecayCurve, format: Format, path: Option<&Path>) -> Result<()> {
    let text = render(config, curve, format);
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| BenchError::io(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| BenchError::io("<stdout>", e)),
    }
}

/// Parse a configuration, accepting either a bare configuration or a JSON
/// results document.
pub fn parse_config(text: &str) -> Result<BenchConfig> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Doc {
        Bare(BenchConfig),
        Report { config: BenchConfig },
    }
    match serde_json::from_str::<Doc>(text) {
        Ok(Doc::Bare(c)) | Ok(Doc::Report { config: c }) => Ok(c),
        Err(e) => Err(BenchError::Config(format!("not a benchmark configuration: {e}"))),
    }
}
