//! Report artefacts of a comparison run: `summary.json`, `decisions.csv`,
//! `cumulative.csv` and a plain-text table.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::cascade::{Cascade, TiePolicy};
use crate::energy::EnergyMode;
use crate::telemetry::{ComparisonReport, FailsafePolicy, SimulationResult};

pub const SUMMARY_FILE: &str = "summary.json";
pub const DECISIONS_FILE: &str = "decisions.csv";
pub const CUMULATIVE_FILE: &str = "cumulative.csv";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproachSummary {
    pub transmissions: usize,
    pub suppressed: usize,
    pub failsafe_fallbacks: usize,
    pub clamped: usize,
    pub joules: f64,
}

impl From<&SimulationResult> for ApproachSummary {
    fn from(r: &SimulationResult) -> Self {
        Self {
            transmissions: r.transmissions,
            suppressed: r.suppressed,
            failsafe_fallbacks: r.failsafe_fallbacks,
            clamped: r.clamped,
            joules: r.total_joules,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub records_total: usize,
    pub records_loaded: usize,
    pub records_skipped: usize,
    pub energy_mode: EnergyMode<f64>,
    pub per_packet_joules: f64,
    pub threshold: f64,
    pub tie: TiePolicy,
    pub failsafe: FailsafePolicy,
    pub traditional: ApproachSummary,
    pub fuzzy: ApproachSummary,
    pub reduction_percent: f64,
    pub transmission_reduction_percent: f64,
}

impl Summary {
    pub fn new(
        traditional: &SimulationResult,
        fuzzy: &SimulationResult,
        comparison: &ComparisonReport,
        mode: &EnergyMode<f64>,
        cascade: &Cascade<f64>,
        failsafe: FailsafePolicy,
    ) -> Self {
        Self {
            records_total: traditional.total_records,
            records_loaded: traditional.decisions.len(),
            records_skipped: traditional.skipped,
            energy_mode: *mode,
            per_packet_joules: traditional.per_packet_joules,
            threshold: cascade.threshold(),
            tie: cascade.tie_policy(),
            failsafe,
            traditional: traditional.into(),
            fuzzy: fuzzy.into(),
            reduction_percent: comparison.reduction_percent,
            transmission_reduction_percent: comparison.transmission_reduction_percent,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serialises");
        s.push('\n');
        s
    }
}

/// Comparison table with joules to one decimal.
pub fn render_table(c: &ComparisonReport) -> String {
    let mut out = String::new();
    out += &format!("{:<44}{:>14}{:>14}\n", "", "Traditional", "Fuzzy");
    out += &format!(
        "{:<44}{:>14}{:>14}\n",
        "Total number of transmissions", c.traditional_transmissions, c.fuzzy_transmissions
    );
    out += &format!(
        "{:<44}{:>14.1}{:>14.1}\n",
        "Energy of total transmissions (J)", c.traditional_joules, c.fuzzy_joules
    );
    out += &format!(
        "{:<44}{:>14}{:>13.1}%\n",
        "Energy saved", "", c.reduction_percent
    );
    out
}

pub fn write_decisions<W: io::Write>(
    writer: W,
    fuzzy: &SimulationResult,
    intermediate_names: &[&str],
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["index", "timestamp", "temperature", "humidity", "energy", "time_of_day"];
    header.extend_from_slice(intermediate_names);
    header.extend_from_slice(&["score", "label", "clamped", "failsafe"]);
    w.write_record(&header)?;
    for d in &fuzzy.decisions {
        let mut row = vec![
            d.index.to_string(),
            d.timestamp.clone(),
            d.temperature.to_string(),
            d.humidity.to_string(),
            d.energy.to_string(),
            d.time_of_day.to_string(),
        ];
        for i in 0..intermediate_names.len() {
            row.push(d.intermediates.get(i).map(f64::to_string).unwrap_or_default());
        }
        row.push(d.score.map(|s| s.to_string()).unwrap_or_default());
        row.push(d.label.to_string());
        row.push(d.clamped.to_string());
        row.push(d.failsafe.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_cumulative<W: io::Write>(writer: W, c: &ComparisonReport) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["index", "traditional_joules", "fuzzy_joules"])?;
    for (i, t, f) in &c.cumulative {
        w.write_record([i.to_string(), t.to_string(), f.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportPaths {
    pub summary: PathBuf,
    pub decisions: PathBuf,
    pub cumulative: PathBuf,
}

/// Writes the three report files into `dir`, creating it if needed.
pub fn write_reports(
    dir: &Path,
    summary: &Summary,
    fuzzy: &SimulationResult,
    comparison: &ComparisonReport,
    cascade: &Cascade<f64>,
) -> io::Result<ReportPaths> {
    fs::create_dir_all(dir)?;
    let paths = ReportPaths {
        summary: dir.join(SUMMARY_FILE),
        decisions: dir.join(DECISIONS_FILE),
        cumulative: dir.join(CUMULATIVE_FILE),
    };
    fs::write(&paths.summary, summary.to_json())?;
    let names = cascade.intermediate_outputs();
    write_decisions(fs::File::create(&paths.decisions)?, fuzzy, &names).map_err(io::Error::other)?;
    write_cumulative(fs::File::create(&paths.cumulative)?, comparison).map_err(io::Error::other)?;
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_uses_one_decimal() {
        let c = ComparisonReport {
            records: 19_735,
            traditional_transmissions: 19_735,
            fuzzy_transmissions: 17_410,
            traditional_joules: 957.8000000001,
            fuzzy_joules: 844.95,
            reduction_percent: 11.78,
            transmission_reduction_percent: 11.78,
            cumulative: vec![],
        };
        let t = render_table(&c);
        assert!(t.contains("957.8"));
        assert!(t.contains("17410"));
        assert!(t.contains("11.8%"));
    }
}
