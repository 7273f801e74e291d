use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::{Telemetry, TelemetryRecord, TIMESTAMP_FORMAT};
use crate::cascade::{Cascade, CascadeError, Label, Reading};
use crate::energy::{packet_energy, EnergyMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Approach {
    Traditional,
    Fuzzy,
}

/// What to do with a record for which no rule fired anywhere in the cascade.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailsafePolicy {
    #[default]
    Send,
    Drop,
}

impl std::str::FromStr for FailsafePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "send" => Ok(FailsafePolicy::Send),
            "drop" => Ok(FailsafePolicy::Drop),
            other => Err(format!("expected `send` or `drop`, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimulationError {
    #[error("record {index}: {source}")]
    Evaluation {
        index: usize,
        #[source]
        source: CascadeError,
    },
    #[error("runs cover different record sets: {0}")]
    MismatchedRuns(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionRecord {
    pub index: usize,
    pub timestamp: String,
    pub temperature: f64,
    pub humidity: f64,
    pub energy: f64,
    pub time_of_day: f64,
    /// Crisp outputs of the non-decision nodes, in evaluation order. Empty
    /// for the traditional approach.
    pub intermediates: Vec<f64>,
    pub score: Option<f64>,
    pub label: Label,
    pub clamped: bool,
    pub failsafe: bool,
}

impl DecisionRecord {
    fn from_record(index: usize, r: &TelemetryRecord) -> Self {
        Self {
            index,
            timestamp: r.timestamp.format(TIMESTAMP_FORMAT).to_string(),
            temperature: r.temperature,
            humidity: r.humidity,
            energy: r.energy,
            time_of_day: r.time_of_day(),
            intermediates: Vec::new(),
            score: None,
            label: Label::Send,
            clamped: false,
            failsafe: false,
        }
    }

    fn same_input(&self, other: &Self) -> bool {
        self.timestamp == other.timestamp
            && self.temperature.to_bits() == other.temperature.to_bits()
            && self.humidity.to_bits() == other.humidity.to_bits()
            && self.energy.to_bits() == other.energy.to_bits()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationResult {
    pub approach: Approach,
    /// Rows in the source, including skipped ones.
    pub total_records: usize,
    pub skipped: usize,
    pub transmissions: usize,
    pub suppressed: usize,
    /// Records for which no rule fired and the fail-safe policy decided.
    pub failsafe_fallbacks: usize,
    /// Records with at least one input clamped into its universe.
    pub clamped: usize,
    pub per_packet_joules: f64,
    pub total_joules: f64,
    pub decisions: Vec<DecisionRecord>,
    /// Joules spent after each record, one entry per decision.
    pub cumulative_joules: Vec<f64>,
}

impl SimulationResult {
    fn assemble(
        approach: Approach,
        telemetry: &Telemetry,
        mode: &EnergyMode<f64>,
        decisions: Vec<DecisionRecord>,
    ) -> Self {
        let per_packet = packet_energy(mode);
        let mut sent = 0usize;
        let cumulative_joules = decisions
            .iter()
            .map(|d| {
                if d.label.is_send() {
                    sent += 1;
                }
                sent as f64 * per_packet
            })
            .collect();
        let failsafe_fallbacks = decisions.iter().filter(|d| d.failsafe).count();
        let clamped = decisions.iter().filter(|d| d.clamped).count();
        Self {
            approach,
            total_records: telemetry.total_rows(),
            skipped: telemetry.skipped.len(),
            transmissions: sent,
            suppressed: decisions.len() - sent,
            failsafe_fallbacks,
            clamped,
            per_packet_joules: per_packet,
            total_joules: sent as f64 * per_packet,
            decisions,
            cumulative_joules,
        }
    }
}

/// Baseline: every loaded record is transmitted.
pub fn run_traditional(telemetry: &Telemetry, mode: &EnergyMode<f64>) -> SimulationResult {
    let decisions = telemetry
        .records
        .iter()
        .enumerate()
        .map(|(i, r)| DecisionRecord::from_record(i, r))
        .collect();
    SimulationResult::assemble(Approach::Traditional, telemetry, mode, decisions)
}

/// Replays every record through `cascade`; a record is transmitted iff its
/// label is `Send`. Out-of-universe readings are clamped and flagged.
pub fn run_fuzzy(
    telemetry: &Telemetry,
    cascade: &Cascade<f64>,
    mode: &EnergyMode<f64>,
    failsafe: FailsafePolicy,
) -> Result<SimulationResult, SimulationError> {
    let decisions = telemetry
        .records
        .par_iter()
        .enumerate()
        .map(|(index, record)| decide_record(index, record, cascade, failsafe))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SimulationResult::assemble(Approach::Fuzzy, telemetry, mode, decisions))
}

fn decide_record(
    index: usize,
    record: &TelemetryRecord,
    cascade: &Cascade<f64>,
    failsafe: FailsafePolicy,
) -> Result<DecisionRecord, SimulationError> {
    let reading = Reading {
        temperature: record.temperature,
        humidity: record.humidity,
        energy: record.energy,
        time: record.time_of_day(),
    };
    let (clamped, moved) = cascade.clamp_externals(&reading.externals());
    let inputs: Vec<(&str, f64)> = clamped.iter().map(|(n, x)| (n.as_str(), *x)).collect();

    let mut out = DecisionRecord::from_record(index, record);
    out.clamped = !moved.is_empty();
    match cascade.evaluate(&inputs) {
        Ok(trace) => {
            let decision = &cascade.decision_node().name;
            out.intermediates = trace
                .nodes
                .iter()
                .filter(|n| &n.node != decision)
                .map(|n| n.crisp)
                .collect();
            out.score = Some(trace.score);
            out.label = trace.label;
        }
        Err(e) if e.is_no_rule_fired() => {
            out.failsafe = true;
            out.label = match failsafe {
                FailsafePolicy::Send => Label::Send,
                FailsafePolicy::Drop => Label::NotSend,
            };
        }
        Err(source) => return Err(SimulationError::Evaluation { index, source }),
    }
    Ok(out)
}

/// Side-by-side totals of a traditional and a fuzzy run over the same
/// records.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub records: usize,
    pub traditional_transmissions: usize,
    pub fuzzy_transmissions: usize,
    pub traditional_joules: f64,
    pub fuzzy_joules: f64,
    /// `(1 - fuzzy / traditional) * 100` on energy.
    pub reduction_percent: f64,
    /// The same ratio on transmission counts.
    pub transmission_reduction_percent: f64,
    /// `(record index, traditional joules, fuzzy joules)` after each record.
    pub cumulative: Vec<(usize, f64, f64)>,
}

fn reduction(base: f64, other: f64) -> f64 {
    if base > 0.0 {
        (1.0 - other / base) * 100.0
    } else {
        0.0
    }
}

pub fn compare(
    traditional: &SimulationResult,
    fuzzy: &SimulationResult,
) -> Result<ComparisonReport, SimulationError> {
    if traditional.total_records != fuzzy.total_records
        || traditional.decisions.len() != fuzzy.decisions.len()
    {
        return Err(SimulationError::MismatchedRuns(format!(
            "{} vs {} records",
            traditional.total_records, fuzzy.total_records
        )));
    }
    if let Some(d) = traditional
        .decisions
        .iter()
        .zip(&fuzzy.decisions)
        .find(|(a, b)| !a.same_input(b))
    {
        return Err(SimulationError::MismatchedRuns(format!(
            "record {} differs",
            d.0.index
        )));
    }
    Ok(ComparisonReport {
        records: traditional.total_records,
        traditional_transmissions: traditional.transmissions,
        fuzzy_transmissions: fuzzy.transmissions,
        traditional_joules: traditional.total_joules,
        fuzzy_joules: fuzzy.total_joules,
        reduction_percent: reduction(traditional.total_joules, fuzzy.total_joules),
        transmission_reduction_percent: reduction(
            traditional.transmissions as f64,
            fuzzy.transmissions as f64,
        ),
        cumulative: traditional
            .cumulative_joules
            .iter()
            .zip(&fuzzy.cumulative_joules)
            .enumerate()
            .map(|(i, (&t, &f))| (i, t, f))
            .collect(),
    })
}
