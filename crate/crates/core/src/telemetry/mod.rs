//! Telemetry CSV ingestion and replay through the cascade.

mod sim;

pub use sim::{
    compare, run_fuzzy, run_traditional, Approach, ComparisonReport, DecisionRecord, FailsafePolicy,
    SimulationError, SimulationResult,
};

use std::path::Path;

use chrono::{NaiveDateTime, Timelike};
use serde::Serialize;
use thiserror::Error;

pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%d %H:%M:%S";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HumidityScale {
    /// Cells hold percent relative humidity (0-100).
    Percent,
    /// Cells already hold a fraction (0-1).
    Fraction,
}

impl std::str::FromStr for HumidityScale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "percent" => Ok(HumidityScale::Percent),
            "fraction" => Ok(HumidityScale::Fraction),
            other => Err(format!("expected `percent` or `fraction`, got `{other}`")),
        }
    }
}

/// Which CSV columns feed the model. The default targets the Appliances
/// Energy Prediction dataset: `date`, `T1`, `RH_1` and `Appliances`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnMapping {
    pub timestamp: String,
    pub temperature: String,
    pub humidity: String,
    pub energy: String,
    pub humidity_scale: HumidityScale,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        Self {
            timestamp: "date".into(),
            temperature: "T1".into(),
            humidity: "RH_1".into(),
            energy: "Appliances".into(),
            humidity_scale: HumidityScale::Percent,
        }
    }
}

impl ColumnMapping {
    fn columns(&self) -> [&str; 4] {
        [&self.timestamp, &self.temperature, &self.humidity, &self.energy]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LoadPolicy {
    /// The first bad row aborts the load.
    Strict,
    /// Bad rows are counted and skipped.
    SkipBad,
}

#[derive(Debug, Error)]
pub enum TelemetryError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid column mapping: {0}")]
    InvalidMapping(String),
    #[error("missing column `{0}` in header")]
    MissingColumn(String),
    #[error("line {line}: bad `{field}`: {reason}")]
    RowError {
        line: u64,
        field: String,
        reason: String,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// One 10-minute interval of the monitored room.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TelemetryRecord {
    #[serde(serialize_with = "serialize_timestamp")]
    pub timestamp: NaiveDateTime,
    /// °C
    pub temperature: f64,
    /// relative humidity as a fraction
    pub humidity: f64,
    /// Wh consumed by appliances in the interval
    pub energy: f64,
}

fn serialize_timestamp<S: serde::Serializer>(ts: &NaiveDateTime, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&ts.format(TIMESTAMP_FORMAT))
}

impl TelemetryRecord {
    /// Time of day in fractional hours, `[0, 24)`.
    pub fn time_of_day(&self) -> f64 {
        let t = self.timestamp.time();
        f64::from(t.hour()) + f64::from(t.minute()) / 60.0 + f64::from(t.second()) / 3600.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedRow {
    pub line: u64,
    pub field: String,
    pub reason: String,
}

/// Records in file order plus whatever was skipped while loading.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Telemetry {
    pub records: Vec<TelemetryRecord>,
    pub skipped: Vec<SkippedRow>,
}

impl Telemetry {
    pub fn from_records(records: Vec<TelemetryRecord>) -> Self {
        Self {
            records,
            skipped: Vec::new(),
        }
    }

    /// Rows seen in the file, loaded or skipped.
    pub fn total_rows(&self) -> usize {
        self.records.len() + self.skipped.len()
    }
}

pub fn load_telemetry(
    path: &Path,
    mapping: &ColumnMapping,
    policy: LoadPolicy,
) -> Result<Telemetry, TelemetryError> {
    let file = std::fs::File::open(path).map_err(|source| TelemetryError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_telemetry(file, mapping, policy)
}

/// Same as [`load_telemetry`] over any reader.
pub fn read_telemetry<R: std::io::Read>(
    reader: R,
    mapping: &ColumnMapping,
    policy: LoadPolicy,
) -> Result<Telemetry, TelemetryError> {
    let cols = mapping.columns();
    for (i, a) in cols.iter().enumerate() {
        if cols[i + 1..].contains(a) {
            return Err(TelemetryError::InvalidMapping(format!(
                "column `{a}` is mapped twice"
            )));
        }
    }

    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let mut index = [0usize; 4];
    for (slot, name) in index.iter_mut().zip(cols) {
        *slot = headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| TelemetryError::MissingColumn(name.to_string()))?;
    }

    let mut out = Telemetry::default();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        match parse_row(&row, &index, mapping) {
            Ok(record) => out.records.push(record),
            Err((field, reason)) => match policy {
                LoadPolicy::Strict => {
                    return Err(TelemetryError::RowError {
                        line,
                        field,
                        reason,
                    })
                }
                LoadPolicy::SkipBad => out.skipped.push(SkippedRow {
                    line,
                    field,
                    reason,
                }),
            },
        }
    }
    Ok(out)
}

fn parse_row(
    row: &csv::StringRecord,
    index: &[usize; 4],
    mapping: &ColumnMapping,
) -> Result<TelemetryRecord, (String, String)> {
    let cell = |i: usize, name: &str| {
        row.get(index[i])
            .map(str::trim)
            .ok_or_else(|| (name.to_string(), "missing cell".to_string()))
    };
    let number = |i: usize, name: &str| -> Result<f64, (String, String)> {
        let raw = cell(i, name)?;
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err((name.to_string(), format!("`{raw}` is not a finite number"))),
        }
    };

    let raw_ts = cell(0, &mapping.timestamp)?;
    let timestamp = NaiveDateTime::parse_from_str(raw_ts, TIMESTAMP_FORMAT).map_err(|e| {
        (
            mapping.timestamp.clone(),
            format!("`{raw_ts}` is not a timestamp ({e})"),
        )
    })?;
    let temperature = number(1, &mapping.temperature)?;
    let mut humidity = number(2, &mapping.humidity)?;
    if mapping.humidity_scale == HumidityScale::Percent {
        humidity /= 100.0;
    }
    let energy = number(3, &mapping.energy)?;
    Ok(TelemetryRecord {
        timestamp,
        temperature,
        humidity,
        energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CSV: &str = "date,Appliances,lights,T1,RH_1\n\
        2016-01-11 17:00:00,60,30,19.89,47.5966666666667\n\
        2016-01-11 17:10:00,60,30,19.89,46.6933333333333\n";

    fn load(text: &str, policy: LoadPolicy) -> Result<Telemetry, TelemetryError> {
        read_telemetry(text.as_bytes(), &ColumnMapping::default(), policy)
    }

    #[test]
    fn loads_default_mapping() {
        let t = load(CSV, LoadPolicy::Strict).unwrap();
        assert_eq!(t.records.len(), 2);
        let r = &t.records[1];
        assert_eq!(r.temperature, 19.89);
        assert!((r.humidity - 0.466933333333333).abs() < 1e-12);
        assert_eq!(r.energy, 60.0);
        assert!((r.time_of_day() - (17.0 + 10.0 / 60.0)).abs() < 1e-12);
    }

    #[test]
    fn percent_humidity_is_normalised() {
        let t = load("date,Appliances,T1,RH_1\n2016-01-11 17:00:00,60,20,40.0\n", LoadPolicy::Strict).unwrap();
        assert_eq!(t.records[0].humidity, 0.4);
        let mapping = ColumnMapping {
            humidity_scale: HumidityScale::Fraction,
            ..ColumnMapping::default()
        };
        let t = read_telemetry("date,Appliances,T1,RH_1\n2016-01-11 17:00:00,60,20,0.4\n".as_bytes(), &mapping, LoadPolicy::Strict).unwrap();
        assert_eq!(t.records[0].humidity, 0.4);
    }

    #[test]
    fn bad_timestamp_strict_and_skip() {
        let text = "date,Appliances,T1,RH_1\n2016-01-11 17:00:00,60,20,40\nnot-a-date,60,20,40\n2016-01-11 17:20:00,70,20,40\n";
        match load(text, LoadPolicy::Strict) {
            Err(TelemetryError::RowError { line, field, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(field, "date");
            }
            other => panic!("unexpected {other:?}"),
        }
        let t = load(text, LoadPolicy::SkipBad).unwrap();
        assert_eq!(t.records.len(), 2);
        assert_eq!(t.skipped.len(), 1);
        assert_eq!(t.total_rows(), 3);
    }

    #[test]
    fn missing_column_and_bad_mapping() {
        assert!(matches!(
            load("date,T1,RH_1\n", LoadPolicy::Strict),
            Err(TelemetryError::MissingColumn(c)) if c == "Appliances"
        ));
        let mapping = ColumnMapping {
            humidity: "T1".into(),
            ..ColumnMapping::default()
        };
        assert!(matches!(
            read_telemetry(CSV.as_bytes(), &mapping, LoadPolicy::Strict),
            Err(TelemetryError::InvalidMapping(_))
        ));
    }

    #[test]
    fn non_finite_and_short_rows() {
        let text = "date,Appliances,T1,RH_1\n2016-01-11 17:00:00,NaN,20,40\n2016-01-11 17:10:00,60\n";
        let t = load(text, LoadPolicy::SkipBad).unwrap();
        assert_eq!(t.skipped.len(), 2);
        assert_eq!(t.skipped[0].field, "Appliances");
    }
}
