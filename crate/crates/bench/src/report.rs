//! JSON records for `isolate --json` and `bench --json`.

use anewdsc::solver::{NodeAction, TraceEvent};
use anewdsc::{Dyadic, IsolationResult, SolveStats};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsRecord {
    pub tree_nodes: u64,
    pub newton_attempts: u64,
    pub newton_successes: u64,
    pub bisections: u64,
    pub max_precision_bits: u64,
    pub max_var_chain: u64,
    pub truncation_hits: u64,
    pub wall_time_s: f64,
}

impl From<&SolveStats> for StatsRecord {
    fn from(s: &SolveStats) -> Self {
        StatsRecord {
            tree_nodes: s.tree_nodes,
            newton_attempts: s.newton_attempts,
            newton_successes: s.newton_successes,
            bisections: s.bisections,
            max_precision_bits: s.max_precision_bits,
            max_var_chain: s.max_var_chain,
            truncation_hits: s.truncation_hits,
            wall_time_s: s.wall_time.as_secs_f64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootRecord {
    pub a: String,
    pub b: String,
}

/// Output of `isolate --json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsolateReport {
    pub roots: Vec<RootRecord>,
    pub points: Vec<String>,
    pub stats: StatsRecord,
}

impl From<&IsolationResult> for IsolateReport {
    fn from(r: &IsolationResult) -> Self {
        IsolateReport {
            roots: r
                .intervals
                .iter()
                .map(|(a, b)| RootRecord {
                    a: a.to_string(),
                    b: b.to_string(),
                })
                .collect(),
            points: r.points.iter().map(Dyadic::to_string).collect(),
            stats: StatsRecord::from(&r.stats),
        }
    }
}

/// One line of `isolate --trace`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceRecord {
    pub a: String,
    pub b: String,
    pub log2_n: u64,
    pub precision_bits: u64,
    pub outcome: String,
    pub var_min: usize,
    pub var_max: usize,
    pub action: String,
}

impl From<&TraceEvent> for TraceRecord {
    fn from(e: &TraceEvent) -> Self {
        let action = match &e.action {
            NodeAction::Discard => "discard".to_string(),
            NodeAction::Report => "report".to_string(),
            NodeAction::Newton(kind) => format!("newton-{}", format!("{kind:?}").to_lowercase()),
            NodeAction::NewtonFailedBisect => "newton-failed-bisect".to_string(),
            NodeAction::Bisect => "bisect".to_string(),
            NodeAction::PointRoot => "point-root".to_string(),
        };
        TraceRecord {
            a: e.a.to_string(),
            b: e.b.to_string(),
            log2_n: e.log_n,
            precision_bits: e.prec_bits,
            outcome: format!("{:?}", e.outcome).to_lowercase(),
            var_min: e.var_min,
            var_max: e.var_max,
            action,
        }
    }
}

/// One benchmark instance under one mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchRecord {
    pub family: String,
    pub n: usize,
    pub tau: u64,
    pub seed: u64,
    pub mode: String,
    pub root_count: Option<usize>,
    pub oracle_count: Option<usize>,
    pub verified: bool,
    pub timed_out: bool,
    pub error: Option<String>,
    pub stats: Option<StatsRecord>,
    /// Wall clock, rounded to 0.1 s.
    pub wall_time_s: f64,
}
