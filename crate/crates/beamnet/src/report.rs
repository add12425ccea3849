//! Run artifacts: reaction-history CSV, run-summary JSON and per-element
//! hinge-state dumps. All writers are deterministic so identical runs
//! produce byte-identical files.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hinge::HingeState;
use crate::solver::{SolveConfig, SolveReport, StepRecord, Termination};

/// Version tag on the first line of every history file.
pub const HISTORY_HEADER: &str = "# beamnet-history v1";
const HISTORY_COLUMNS: &str = "step,u_mm,reaction_N,stress_MPa,iters,n_ruptured,min_beta";

const STATES_FORMAT: &str = "beamnet-states";
const STATES_VERSION: u32 = 1;

/// One parsed history line; the CSV projection of a [`StepRecord`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryRow {
    pub step: usize,
    pub u_mm: f64,
    pub reaction_n: f64,
    pub stress_mpa: f64,
    pub iters: usize,
    pub n_ruptured: usize,
    pub min_beta: f64,
}

impl From<&StepRecord> for HistoryRow {
    fn from(r: &StepRecord) -> Self {
        Self {
            step: r.step,
            u_mm: r.u,
            reaction_n: r.reaction,
            stress_mpa: r.stress,
            iters: r.iterations,
            n_ruptured: r.n_ruptured,
            min_beta: r.min_beta,
        }
    }
}

/// Parse failures of report files.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReportError {
    #[error("missing or unsupported history header (expected {HISTORY_HEADER:?})")]
    BadHeader,
    #[error("history line {line}: {message}")]
    BadRow { line: usize, message: String },
    #[error("bad summary document: {0}")]
    BadSummary(String),
    #[error("bad states document: {0}")]
    BadStates(String),
}

fn rows_csv(rows: &[HistoryRow]) -> String {
    let mut out = String::new();
    out.push_str(HISTORY_HEADER);
    out.push('\n');
    out.push_str(HISTORY_COLUMNS);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.step, r.u_mm, r.reaction_n, r.stress_mpa, r.iters, r.n_ruptured, r.min_beta
        ));
    }
    out
}

/// Serializes the step history as versioned CSV.
pub fn history_csv(records: &[StepRecord]) -> String {
    let rows: Vec<HistoryRow> = records.iter().map(HistoryRow::from).collect();
    rows_csv(&rows)
}

/// Parses a history file back into rows; writing the result reproduces the
/// input byte for byte.
pub fn parse_history(text: &str) -> Result<Vec<HistoryRow>, ReportError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, line)) if line == HISTORY_HEADER => {}
        _ => return Err(ReportError::BadHeader),
    }
    match lines.next() {
        Some((_, line)) if line == HISTORY_COLUMNS => {}
        _ => return Err(ReportError::BadHeader),
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let bad = |message: &str| ReportError::BadRow {
            line: idx + 1,
            message: message.into(),
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(bad(&format!("expected 7 fields, got {}", fields.len())));
        }
        rows.push(HistoryRow {
            step: fields[0].parse().map_err(|_| bad("bad step"))?,
            u_mm: fields[1].parse().map_err(|_| bad("bad u_mm"))?,
            reaction_n: fields[2].parse().map_err(|_| bad("bad reaction_N"))?,
            stress_mpa: fields[3].parse().map_err(|_| bad("bad stress_MPa"))?,
            iters: fields[4].parse().map_err(|_| bad("bad iters"))?,
            n_ruptured: fields[5].parse().map_err(|_| bad("bad n_ruptured"))?,
            min_beta: fields[6].parse().map_err(|_| bad("bad min_beta"))?,
        });
    }
    Ok(rows)
}

/// Re-serializes parsed rows, for round-trip checks and file rewrites.
pub fn history_csv_from_rows(rows: &[HistoryRow]) -> String {
    rows_csv(rows)
}

/// Hinge-state census of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateCounts {
    pub virgin: usize,
    pub softening: usize,
    pub ruptured: usize,
}

impl StateCounts {
    pub fn from_states(states: &[HingeState]) -> Self {
        let mut counts = Self { virgin: 0, softening: 0, ruptured: 0 };
        for s in states {
            if s.ruptured {
                counts.ruptured += 1;
            } else if s.alpha > 0.0 {
                counts.softening += 1;
            } else {
                counts.virgin += 1;
            }
        }
        counts
    }
}

/// Machine-readable digest of one run: the config echo plus outcome
/// statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub config: SolveConfig,
    pub termination: Termination,
    pub n_steps_completed: usize,
    pub cumulative_iterations: usize,
    pub peak_reaction: f64,
    pub state_counts: StateCounts,
    /// Wall-clock seconds, filled in by the caller; not part of the
    /// numeric results.
    pub wall_time_s: f64,
}

/// Builds the summary of a finished (or failed) run.
pub fn summarize(config: &SolveConfig, report: &SolveReport, wall_time_s: f64) -> RunSummary {
    RunSummary {
        config: config.clone(),
        termination: report.termination.clone(),
        n_steps_completed: report.records.len(),
        cumulative_iterations: report.cumulative_iterations,
        peak_reaction: report
            .records
            .iter()
            .map(|r| r.reaction)
            .fold(0.0f64, f64::max),
        state_counts: StateCounts::from_states(&report.final_states),
        wall_time_s,
    }
}

impl RunSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        serde_json::from_str(text).map_err(|e| ReportError::BadSummary(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct StatesDoc {
    format: String,
    version: u32,
    states: Vec<HingeState>,
}

/// Serializes per-element hinge states as a versioned JSON document.
pub fn states_json(states: &[HingeState]) -> String {
    serde_json::to_string_pretty(&StatesDoc {
        format: STATES_FORMAT.into(),
        version: STATES_VERSION,
        states: states.to_vec(),
    })
    .expect("state serialization cannot fail")
}

/// Parses a per-element state dump.
pub fn parse_states(text: &str) -> Result<Vec<HingeState>, ReportError> {
    let doc: StatesDoc = serde_json::from_str(text)
        .map_err(|e| ReportError::BadStates(e.to_string()))?;
    if doc.format != STATES_FORMAT || doc.version != STATES_VERSION {
        return Err(ReportError::BadStates(format!(
            "got format {:?} v{}",
            doc.format, doc.version
        )));
    }
    Ok(doc.states)
}
