//! Per-iteration traces of the heuristics.
//!
//! The CSV body is deterministic. Wall-clock times go to a single `#`
//! comment line ahead of the header.

use std::time::Duration;

use serde::Serialize;

use crate::adoption::DesignEvaluation;
use crate::design::Design;
use crate::instance::TripSet;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRecord {
    /// Running index over the whole trace.
    pub k: usize,
    /// Phase label: `main`, `inner`, `stage1`, `stage2`, `cycle` or `final`.
    pub phase: String,
    /// Outer iteration for nested algorithms, otherwise equal to `k`.
    pub outer: usize,
    pub trip_set_size: usize,
    pub fingerprint: String,
    pub open_arcs: usize,
    pub objective: f64,
    pub adopters: usize,
    pub r_false: f64,
    pub a_false: f64,
    #[serde(skip)]
    pub wall: Duration,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct HeuristicTrace {
    pub algorithm: String,
    pub records: Vec<TraceRecord>,
    /// Set when an iteration cap or time limit cut the run short.
    pub truncated: bool,
}

impl HeuristicTrace {
    pub fn new(algorithm: impl Into<String>) -> Self {
        HeuristicTrace { algorithm: algorithm.into(), records: Vec::new(), truncated: false }
    }

    pub fn push(
        &mut self,
        phase: &str,
        outer: usize,
        t_hat: &TripSet,
        design: &Design,
        eval: &DesignEvaluation,
        wall: Duration,
    ) {
        self.records.push(TraceRecord {
            k: self.records.len(),
            phase: phase.to_string(),
            outer,
            trip_set_size: t_hat.len(),
            fingerprint: design.fingerprint(),
            open_arcs: design.len(),
            objective: eval.objective,
            adopters: eval.adopters.len(),
            r_false: eval.r_false,
            a_false: eval.a_false,
            wall,
        });
    }

    pub fn min_objective(&self) -> Option<f64> {
        self.records.iter().map(|r| r.objective).min_by(f64::total_cmp)
    }

    /// CSV body only: one row per record.
    pub fn csv_body(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(r).expect("in-memory csv");
        }
        if self.records.is_empty() {
            w.write_record([
                "k", "phase", "outer", "trip_set_size", "fingerprint", "open_arcs", "objective", "adopters",
                "r_false", "a_false",
            ])
            .expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv")
    }

    /// Full trace file: a comment line with run metadata and timings, then
    /// the body.
    pub fn to_csv(&self) -> String {
        let times: Vec<String> = self.records.iter().map(|r| format!("{:.3}", r.wall.as_secs_f64())).collect();
        format!(
            "# algorithm={} tool_version={} truncated={} wall_seconds={}\n{}",
            self.algorithm,
            crate::TOOL_VERSION,
            self.truncated,
            times.join(";"),
            self.csv_body()
        )
    }
}

/// Result of one heuristic run.
#[derive(Clone, Debug)]
pub struct HeuristicOutcome {
    pub design: Design,
    /// Trip set the returned design was computed for.
    pub t_hat: TripSet,
    pub evaluation: DesignEvaluation,
    pub trace: HeuristicTrace,
}
