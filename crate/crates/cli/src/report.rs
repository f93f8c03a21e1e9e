//! Run reports and console number formatting.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Serialize, Serializer};
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

/// An `f64` that serializes non-finite values as the strings `inf`, `-inf`
/// and `nan` instead of `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str(&fmt_num(self.0))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentroidSummary {
    pub mode: String,
    pub bins: usize,
    pub iterations: usize,
    pub converged: bool,
    pub projected: bool,
    /// Energies of the DC objective at the first and last iterate.
    pub initial_energy: Option<Num>,
    pub final_energy: Option<Num>,
    pub energy_trace_len: usize,
    /// Largest single-step energy increase along the trace (zero when monotone).
    pub max_energy_increase: Option<Num>,
    pub stationarity_gap: Option<Num>,
    pub kkt_gap: Option<Num>,
    pub fixed_point_residual: Option<Num>,
    /// `Σ ωⱼ JS^{α,w}(pⱼ : c)` on the unprojected inputs.
    pub js_objective: Num,
    /// `Σ ωⱼ J⁺(pⱼ, c)` for the Jeffreys mode.
    pub jeffreys_objective: Option<Num>,
    /// Same objective for the Jeffreys centroid when compared.
    pub jeffreys_js_objective: Option<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterSummary {
    pub k: usize,
    pub divergence: String,
    pub seed: u64,
    pub seeds: Vec<usize>,
    pub assignment: Vec<usize>,
    pub rounds: usize,
    pub converged: bool,
    pub objective_trace: Vec<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramSummary {
    pub bins: usize,
    pub pixels: usize,
    pub maxval: u16,
    pub normalized: bool,
    pub negative: bool,
}

/// Structured record of one command; written with sorted keys.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<String>,
    pub unit: Option<String>,
    pub values: BTreeMap<String, Num>,
    pub centroid: Option<CentroidSummary>,
    pub cluster: Option<ClusterSummary>,
    pub histogram: Option<HistogramSummary>,
    pub outputs: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str, inputs: &[impl AsRef<Path>]) -> Self {
        RunReport {
            command: command.to_owned(),
            inputs: inputs.iter().map(|p| p.as_ref().display().to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut text = serde_json::to_string_pretty(&sorted(value)).expect("value serializes");
        text.push('\n');
        text
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| CliError::write(path, e))
    }
}

fn sorted(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sorted(v))).collect::<Map<_, _>>())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sorted).collect()),
        other => other,
    }
}

/// Twelve significant digits; fixed notation for exponents in `[-5, 12)`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-5..12).contains(&exp) {
        format!("{:.*}", (11 - exp) as usize, x)
    } else {
        sci
    }
}
