//! Run orchestration shared by the command-line tool and the examples:
//! algorithm dispatch, result bundles and comparison tables.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::adoption::{eval_design, exact_tiny, EvaluationRow};
use crate::arc_heuristics::{arc_s1, arc_s2, ArcOptions, ExpansionRule};
use crate::design::{Design, DesignFile};
use crate::dfd::solve_dfd;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::trace::{HeuristicOutcome, HeuristicTrace};
use crate::trip_heuristics::{eta_grre, rho_gagr, rho_grad, TripOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Algorithm {
    /// Fixed-demand optimum for the whole trip set.
    Dfd,
    /// Exhaustive leader optimum, tiny instances only.
    Exact,
    Grad,
    Grre,
    Gagr,
    ArcS1,
    ArcS2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Dfd,
        Algorithm::Exact,
        Algorithm::Grad,
        Algorithm::Grre,
        Algorithm::Gagr,
        Algorithm::ArcS1,
        Algorithm::ArcS2,
    ];

    /// The five heuristics.
    pub const HEURISTICS: [Algorithm; 5] =
        [Algorithm::Grad, Algorithm::Grre, Algorithm::Gagr, Algorithm::ArcS1, Algorithm::ArcS2];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dfd => "dfd",
            Algorithm::Exact => "exact",
            Algorithm::Grad => "grad",
            Algorithm::Grre => "grre",
            Algorithm::Gagr => "gagr",
            Algorithm::ArcS1 => "arc-s1",
            Algorithm::ArcS2 => "arc-s2",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Parameter(format!("unknown algorithm `{s}`")))
    }
}

/// Algorithm parameters; unset step sizes use the instance default.
#[derive(Clone, Debug, PartialEq)]
pub struct RunParams {
    pub rho: Option<usize>,
    pub eta: Option<usize>,
    /// One rule for arc-S1, two for arc-S2.
    pub rules: Vec<ExpansionRule>,
    pub time_limit: Option<Duration>,
    pub detect_cycles: bool,
    pub fixed: Design,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams {
            rho: None,
            eta: None,
            rules: Vec::new(),
            time_limit: None,
            detect_cycles: false,
            fixed: Design::empty(),
        }
    }
}

impl RunParams {
    fn trip_options(&self, inst: &Instance) -> TripOptions {
        let mut o = TripOptions::for_instance(inst);
        o.rho = self.rho.unwrap_or(o.rho);
        o.eta = self.eta.unwrap_or(o.eta);
        o.time_limit = self.time_limit;
        o.detect_cycles = self.detect_cycles;
        o
    }

    fn rules_for(&self, alg: Algorithm) -> Result<Vec<ExpansionRule>> {
        let (want, default) = match alg {
            Algorithm::ArcS1 => (1, vec![ExpansionRule::A]),
            Algorithm::ArcS2 => (2, vec![ExpansionRule::D, ExpansionRule::A]),
            _ => return Ok(vec![]),
        };
        if self.rules.is_empty() {
            return Ok(default);
        }
        if self.rules.len() != want {
            return Err(Error::Parameter(format!("{alg} takes {want} expansion rule(s), got {}", self.rules.len())));
        }
        Ok(self.rules.clone())
    }
}

/// Runs one algorithm and evaluates its design over the full trip set.
pub fn run_algorithm(inst: &Instance, alg: Algorithm, params: &RunParams) -> Result<HeuristicOutcome> {
    let started = Instant::now();
    let fixed = &params.fixed;
    match alg {
        Algorithm::Dfd => {
            let t_hat = inst.all_trips();
            let sol = solve_dfd(inst, &t_hat, fixed)?;
            let evaluation = eval_design(inst, &sol.design, &t_hat)?;
            let mut trace = HeuristicTrace::new(alg.name());
            trace.push("main", 0, &t_hat, &sol.design, &evaluation, started.elapsed());
            Ok(HeuristicOutcome { design: sol.design, t_hat, evaluation, trace })
        }
        Algorithm::Exact => {
            let ex = exact_tiny(inst, fixed)?;
            let mut trace = HeuristicTrace::new(alg.name());
            trace.push("main", 0, &ex.t_hat_star, &ex.design, &ex.evaluation, started.elapsed());
            Ok(HeuristicOutcome { design: ex.design, t_hat: ex.t_hat_star, evaluation: ex.evaluation, trace })
        }
        Algorithm::Grad => rho_grad(inst, &params.trip_options(inst), fixed),
        Algorithm::Grre => eta_grre(inst, &params.trip_options(inst), fixed),
        Algorithm::Gagr => rho_gagr(inst, &params.trip_options(inst), fixed),
        Algorithm::ArcS1 | Algorithm::ArcS2 => {
            let rules = params.rules_for(alg)?;
            let opts = ArcOptions::default();
            let out = if alg == Algorithm::ArcS1 {
                arc_s1(inst, rules[0], fixed, &opts)?
            } else {
                arc_s2(inst, rules[0], rules[1], fixed, &opts)?
            };
            Ok(out.outcome)
        }
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

/// Writes `design.json`, `evaluation.json` and `trace.csv` into `dir`.
pub fn write_bundle(dir: &Path, inst: &Instance, outcome: &HeuristicOutcome) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.display().to_string(), source })?;
    let design = serde_json::to_string_pretty(&DesignFile::new(inst, &outcome.design)).expect("serializable");
    write(&dir.join("design.json"), &(design + "\n"))?;
    let report = outcome.evaluation.report(&outcome.design, &outcome.t_hat);
    let eval = serde_json::to_string_pretty(&report).expect("serializable");
    write(&dir.join("evaluation.json"), &(eval + "\n"))?;
    write(&dir.join("trace.csv"), &outcome.trace.to_csv())
}

/// Hex SHA-256 of a byte string.
pub fn content_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareRow {
    pub instance: String,
    pub algorithm: String,
    /// `ok` or the error message of a failed run.
    pub status: String,
    pub open_arcs: Option<usize>,
    pub fingerprint: Option<String>,
    pub best_known: Option<f64>,
    /// Relative gap to the best known objective, in percent.
    pub gap_pct: Option<f64>,
    #[serde(flatten)]
    pub metrics: Option<EvaluationRow>,
    #[serde(skip)]
    pub wall: Duration,
}

/// Runs every algorithm on every instance. Failed runs become rows with an
/// error status. The best known objective per instance is the minimum over
/// its successful rows.
pub fn compare(instances: &[(String, Instance)], algorithms: &[Algorithm], params: &RunParams) -> Result<Vec<CompareRow>> {
    if algorithms.is_empty() {
        return Err(Error::Parameter("no algorithms to compare".into()));
    }
    let mut rows = Vec::new();
    for (name, inst) in instances {
        let first = rows.len();
        for &alg in algorithms {
            let started = Instant::now();
            let row = match run_algorithm(inst, alg, params) {
                Ok(out) => CompareRow {
                    instance: name.clone(),
                    algorithm: alg.to_string(),
                    status: "ok".into(),
                    open_arcs: Some(out.design.len()),
                    fingerprint: Some(out.design.fingerprint()),
                    best_known: None,
                    gap_pct: None,
                    metrics: Some(out.evaluation.row()),
                    wall: started.elapsed(),
                },
                Err(e) => CompareRow {
                    instance: name.clone(),
                    algorithm: alg.to_string(),
                    status: e.to_string(),
                    open_arcs: None,
                    fingerprint: None,
                    best_known: None,
                    gap_pct: None,
                    metrics: None,
                    wall: started.elapsed(),
                },
            };
            rows.push(row);
        }
        let best = rows[first..]
            .iter()
            .filter_map(|r| r.metrics.as_ref().map(|m| m.objective))
            .min_by(f64::total_cmp);
        if let Some(best) = best {
            for r in &mut rows[first..] {
                r.best_known = Some(best);
                r.gap_pct = r.metrics.as_ref().map(|m| (m.objective - best) / best.abs().max(1e-12) * 100.0);
            }
        }
    }
    Ok(rows)
}

/// Comparison table as CSV. Wall times go to the leading comment line.
pub fn compare_csv(rows: &[CompareRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "instance",
        "algorithm",
        "status",
        "open_arcs",
        "fingerprint",
        "best_known",
        "gap_pct",
        "objective",
        "adopters",
        "r_false",
        "a_false",
        "shuttle_km",
        "bus_investment",
        "bus_investment_dollars",
        "total_convenience_minutes",
        "agency_net_cost",
    ])
    .expect("in-memory csv");
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        let m = r.metrics.as_ref();
        w.write_record([
            r.instance.clone(),
            r.algorithm.clone(),
            r.status.clone(),
            r.open_arcs.map(|x| x.to_string()).unwrap_or_default(),
            r.fingerprint.clone().unwrap_or_default(),
            opt(r.best_known),
            opt(r.gap_pct),
            opt(m.map(|m| m.objective)),
            m.map(|m| m.adopters.to_string()).unwrap_or_default(),
            opt(m.map(|m| m.r_false)),
            opt(m.map(|m| m.a_false)),
            opt(m.map(|m| m.shuttle_km)),
            opt(m.map(|m| m.bus_investment)),
            opt(m.map(|m| m.bus_investment_dollars)),
            opt(m.map(|m| m.total_convenience_minutes)),
            opt(m.map(|m| m.agency_net_cost)),
        ])
        .expect("in-memory csv");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv");
    let times: Vec<String> = rows.iter().map(|r| format!("{:.3}", r.wall.as_secs_f64())).collect();
    format!("# tool_version={} wall_seconds={}\n{}", crate::TOOL_VERSION, times.join(";"), body)
}
