//! Histogram files: CSV, JSON and PGM ingestion, CSV emission.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use skewjs_core::{DiscreteDensity, PositiveDensity};

use crate::error::{CliError, Result};
use crate::pgm::PgmImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Pgm,
}

impl Format {
    /// Guesses from the extension; anything unrecognised is read as CSV.
    pub fn from_path(path: &Path) -> Self {
        let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
        match ext.as_deref() {
            Some("json") => Format::Json,
            Some("pgm") | Some("pnm") => Format::Pgm,
            _ => Format::Csv,
        }
    }
}

/// A parsed histogram file; `bins` are raw counts or probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramFile {
    pub format: Format,
    pub path: PathBuf,
    pub bins: Vec<f64>,
}

impl HistogramFile {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let format = Format::from_path(path);
        let bytes = std::fs::read(path).map_err(|e| CliError::parse(path, e.to_string()))?;
        Self::parse(format, &bytes, path)
    }

    pub fn parse(format: Format, bytes: &[u8], path: &Path) -> Result<Self> {
        let bins = match format {
            Format::Csv => parse_csv(bytes, path)?,
            Format::Json => parse_json(bytes, path)?,
            Format::Pgm => PgmImage::decode(bytes, path)?.histogram(false),
        };
        if bins.is_empty() {
            return Err(CliError::parse(path, "no bins"));
        }
        if let Some((i, v)) = bins.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(CliError::parse(path, format!("bin {i} has invalid value {v}")));
        }
        Ok(HistogramFile {
            format,
            path: path.to_path_buf(),
            bins,
        })
    }

    pub fn positive(&self) -> Result<PositiveDensity> {
        PositiveDensity::new(self.bins.clone()).map_err(|e| self.semantic(e))
    }

    /// The bins divided by their total.
    pub fn density(&self) -> Result<DiscreteDensity> {
        self.positive()?.normalize().map_err(|e| self.semantic(e))
    }

    fn semantic(&self, e: skewjs_core::Error) -> CliError {
        CliError::Semantic(format!("{}: {e}", self.path.display()))
    }
}

fn parse_csv(bytes: &[u8], path: &Path) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(bytes);
    let mut bins = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::parse(path, e.to_string()))?;
        let field = match record.len() {
            0 => continue,
            1 | 2 => &record[record.len() - 1],
            n => return Err(CliError::parse(path, format!("row {} has {n} fields", row + 1))),
        };
        if field.is_empty() && record.len() == 1 {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) => bins.push(v),
            // a `label,value` header row
            Err(_) if row == 0 && record.len() == 2 => {}
            Err(_) => {
                return Err(CliError::parse(
                    path,
                    format!("row {}: {field:?} is not a number", row + 1),
                ))
            }
        }
    }
    Ok(bins)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonHistogram {
    Array(Vec<f64>),
    Object { bins: Vec<f64> },
}

fn parse_json(bytes: &[u8], path: &Path) -> Result<Vec<f64>> {
    match serde_json::from_slice::<JsonHistogram>(bytes) {
        Ok(JsonHistogram::Array(bins)) | Ok(JsonHistogram::Object { bins }) => Ok(bins),
        Err(_) => Err(CliError::parse(
            path,
            "expected an array of numbers or an object with a \"bins\" array",
        )),
    }
}

/// `index,value` rows; values use the shortest representation that reads
/// back to the same `f64`.
pub fn to_csv(bins: &[f64]) -> String {
    let mut out = String::with_capacity(bins.len() * 12);
    for (i, v) in bins.iter().enumerate() {
        out.push_str(&format!("{i},{v}\n"));
    }
    out
}

pub fn write_csv(path: &Path, bins: &[f64]) -> Result<()> {
    std::fs::write(path, to_csv(bins)).map_err(|e| CliError::write(path, e))
}
