//! Report schema (version 1) and its JSON / CSV encodings.
//!
//! JSON reports carry every field; absent sections are omitted. The CSV form
//! of a report is one row per detector under the header
//! `detector,probability,oracle_probability`. Sweeps use the header in
//! [`SWEEP_HEADER`], one row per grid point.

use std::io::Write;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

pub const REPORT_HEADER: [&str; 3] = ["detector", "probability", "oracle_probability"];

pub const SWEEP_HEADER: [&str; 9] = [
    "T",
    "P_A",
    "P_B",
    "weak_IX_A",
    "weak_IY_A",
    "weak_IX_B",
    "weak_IY_B",
    "oracle_P_A",
    "oracle_P_B",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::validation(
                "--format",
                format!("unsupported format `{other}` (json|csv)"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub model: String,
    /// `closed-form`, `monte-carlo`, `born`, `hidden-polarization` or `inverse-correlation`.
    pub method: String,
    pub version: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmWeakValues {
    pub x: f64,
    pub y: f64,
}

/// Post-selected arm averages for one detected outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AverageEntry {
    pub outcome: String,
    #[serde(rename = "I_Z")]
    pub background: f64,
    pub floor: f64,
    pub c_required: f64,
    pub avg_x: f64,
    pub avg_y: f64,
    pub weak_x: f64,
    pub weak_y: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub n: usize,
    pub seed: u64,
    pub standard_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub provenance: Provenance,
    pub probabilities: IndexMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_probabilities: Option<IndexMap<String, f64>>,
    /// Largest absolute difference from the oracle probabilities.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_residual: Option<f64>,
    /// Required correlation `C` per outcome.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlations: Option<IndexMap<String, f64>>,
    /// Arm weak values per detected outcome.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weak_values: Option<IndexMap<String, ArmWeakValues>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub averages: Vec<AverageEntry>,
    /// Correlation `E = P(++) + P(--) - P(+-) - P(-+)` for a pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlation_e: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<SampleStats>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// One grid point of a sweep. Empty cells are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "P_A")]
    pub p_a: f64,
    #[serde(rename = "P_B")]
    pub p_b: f64,
    #[serde(rename = "weak_IX_A")]
    pub weak_ix_a: Option<f64>,
    #[serde(rename = "weak_IY_A")]
    pub weak_iy_a: Option<f64>,
    #[serde(rename = "weak_IX_B")]
    pub weak_ix_b: Option<f64>,
    #[serde(rename = "weak_IY_B")]
    pub weak_iy_b: Option<f64>,
    #[serde(rename = "oracle_P_A")]
    pub oracle_p_a: Option<f64>,
    #[serde(rename = "oracle_P_B")]
    pub oracle_p_b: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub schema_version: u32,
    pub base: ExperimentConfig,
    pub parameter: String,
    pub rows: Vec<SweepRow>,
}

fn json<W: Write, S: Serialize>(value: &S, mut out: W) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::io("writing JSON", e.into()))?;
    out.write_all(b"\n").map_err(|e| CliError::io("writing JSON", e))
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::io("writing CSV", e.into())
}

pub fn emit<W: Write>(report: &Report, format: Format, out: W) -> CliResult<()> {
    match format {
        Format::Json => json(report, out),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(REPORT_HEADER).map_err(csv_error)?;
            for (label, p) in &report.probabilities {
                let oracle = report
                    .oracle_probabilities
                    .as_ref()
                    .and_then(|o| o.get(label))
                    .map(f64::to_string)
                    .unwrap_or_default();
                w.write_record([label.as_str(), &p.to_string(), &oracle])
                    .map_err(csv_error)?;
            }
            w.flush().map_err(|e| CliError::io("writing CSV", e))
        }
    }
}

pub fn emit_sweep<W: Write>(sweep: &Sweep, format: Format, out: W) -> CliResult<()> {
    match format {
        Format::Json => json(sweep, out),
        Format::Csv => {
            // header written by hand so an empty sweep still gets one
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(SWEEP_HEADER).map_err(csv_error)?;
            for row in &sweep.rows {
                w.serialize(row).map_err(csv_error)?;
            }
            w.flush().map_err(|e| CliError::io("writing CSV", e))
        }
    }
}
