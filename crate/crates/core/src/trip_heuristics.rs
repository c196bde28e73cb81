//! Trip-based heuristics: greedy adoption (`rho_grad`), greedy rejection
//! (`eta_grre`) and their combination (`rho_gagr`).
//!
//! Every iteration solves the fixed-demand problem for a trip set, evaluates
//! the design over all trips and rebuilds the trip set from the adopters.
//! Adopters are ranked by net cost, ties by trip id.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use crate::adoption::{eval_design, net_cost, DesignEvaluation};
use crate::design::Design;
use crate::dfd::{DfdOptions, DfdSolver};
use crate::error::{Error, Result};
use crate::instance::{Instance, TripId, TripSet};
use crate::trace::{HeuristicOutcome, HeuristicTrace};
use crate::tol;

#[derive(Clone, Debug, PartialEq)]
pub struct TripOptions {
    pub rho: usize,
    pub eta: usize,
    /// Outer iteration cap; `None` uses the algorithm default.
    pub max_iterations: Option<usize>,
    /// Stop greedy rejection when a design recurs after a different one.
    pub detect_cycles: bool,
    /// Checked between iterations; the current iteration always finishes.
    pub time_limit: Option<Duration>,
    pub dfd: DfdOptions,
}

impl TripOptions {
    /// Both step sizes set to `max(1, |T'| / 20)`.
    pub fn for_instance(inst: &Instance) -> Self {
        let step = default_step(inst);
        TripOptions {
            rho: step,
            eta: step,
            max_iterations: None,
            detect_cycles: false,
            time_limit: None,
            dfd: DfdOptions::default(),
        }
    }

    fn check(&self) -> Result<()> {
        if self.rho == 0 || self.eta == 0 {
            return Err(Error::Parameter("step sizes must be at least 1".into()));
        }
        if self.time_limit.is_some_and(|t| t.is_zero()) {
            return Err(Error::Parameter("time limit must be positive".into()));
        }
        Ok(())
    }
}

pub fn default_step(inst: &Instance) -> usize {
    (inst.latent_trips().len() / 20).max(1)
}

const GRRE_CAP: usize = 100;

/// Latent trips outside `skip` that adopt, sorted by net cost then id.
fn ranked_adopters(inst: &Instance, eval: &DesignEvaluation, skip: &TripSet) -> Vec<TripId> {
    let mut adp: Vec<(f64, TripId)> = inst
        .trips()
        .iter()
        .zip(&eval.routes)
        .zip(&eval.adopts)
        .filter(|((t, _), d)| **d == Some(true) && !skip.contains(&t.id))
        .map(|((t, r), _)| (net_cost(r, inst), t.id))
        .collect();
    adp.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    adp.into_iter().map(|(_, id)| id).collect()
}

fn with(base: &TripSet, extra: impl IntoIterator<Item = TripId>) -> TripSet {
    let mut s = base.clone();
    s.extend(extra);
    s
}

struct Best {
    design: Design,
    t_hat: TripSet,
    eval: DesignEvaluation,
}

impl Best {
    fn offer(slot: &mut Option<Best>, design: &Design, t_hat: &TripSet, eval: &DesignEvaluation) {
        let better = match slot {
            None => true,
            Some(b) => eval.objective < b.eval.objective - tol(b.eval.objective),
        };
        if better {
            *slot = Some(Best { design: design.clone(), t_hat: t_hat.clone(), eval: eval.clone() });
        }
    }
}

/// Greedy adoption. Returns the last design, which satisfies correct
/// rejection for its trip set.
pub fn rho_grad(inst: &Instance, opts: &TripOptions, fixed: &Design) -> Result<HeuristicOutcome> {
    let mut solver = DfdSolver::new(inst, opts.dfd);
    rho_grad_with(&mut solver, opts, fixed)
}

pub fn rho_grad_with(solver: &mut DfdSolver, opts: &TripOptions, fixed: &Design) -> Result<HeuristicOutcome> {
    opts.check()?;
    let inst = solver.instance();
    let started = Instant::now();
    let core = inst.core_trips();
    let cap = opts.max_iterations.unwrap_or(inst.latent_trips().len() / opts.rho + 10);
    let mut trace = HeuristicTrace::new("grad");
    let mut absorbed = TripSet::new();
    let mut k = 0;
    loop {
        let t_hat = with(&core, absorbed.iter().copied());
        let sol = solver.solve(&t_hat, fixed)?;
        let eval = eval_design(inst, &sol.design, &t_hat)?;
        trace.push("main", k, &t_hat, &sol.design, &eval, started.elapsed());
        let adopters = ranked_adopters(inst, &eval, &absorbed);
        let stop = adopters.is_empty();
        let out_of_budget = k + 1 >= cap || opts.time_limit.is_some_and(|t| started.elapsed() >= t);
        if stop || out_of_budget {
            trace.truncated = !stop;
            return Ok(HeuristicOutcome { design: sol.design, t_hat, evaluation: eval, trace });
        }
        absorbed.extend(adopters.into_iter().take(opts.rho));
        k += 1;
    }
}

/// Greedy rejection. Returns the minimum-objective design seen.
pub fn eta_grre(inst: &Instance, opts: &TripOptions, fixed: &Design) -> Result<HeuristicOutcome> {
    let mut solver = DfdSolver::new(inst, opts.dfd);
    eta_grre_with(&mut solver, opts, fixed, None)
}

/// Greedy rejection starting from `start` instead of the core trips.
pub fn eta_grre_with(
    solver: &mut DfdSolver,
    opts: &TripOptions,
    fixed: &Design,
    start: Option<&TripSet>,
) -> Result<HeuristicOutcome> {
    opts.check()?;
    let started = Instant::now();
    let mut trace = HeuristicTrace::new("grre");
    let best = grre_loop(solver, opts, fixed, start, &mut trace, 0, started)?;
    Ok(HeuristicOutcome { design: best.design, t_hat: best.t_hat, evaluation: best.eval, trace })
}

fn grre_loop(
    solver: &mut DfdSolver,
    opts: &TripOptions,
    fixed: &Design,
    start: Option<&TripSet>,
    trace: &mut HeuristicTrace,
    outer: usize,
    started: Instant,
) -> Result<Best> {
    let inst = solver.instance();
    let core = inst.core_trips();
    let cap = opts.max_iterations.unwrap_or(GRRE_CAP);
    let phase = if trace.algorithm == "grre" { "main" } else { "inner" };
    let mut t_hat = start.cloned().unwrap_or_else(|| core.clone());
    let mut rejected = TripSet::new();
    let mut m = 0usize;
    let mut best: Option<Best> = None;
    let mut prev: Option<Design> = None;
    let mut seen: HashSet<Design> = HashSet::new();
    for k in 0.. {
        let sol = solver.solve(&t_hat, fixed)?;
        let eval = eval_design(inst, &sol.design, &t_hat)?;
        trace.push(phase, outer, &t_hat, &sol.design, &eval, started.elapsed());
        Best::offer(&mut best, &sol.design, &t_hat, &eval);

        for (t, d) in inst.trips().iter().zip(&eval.adopts) {
            if *d == Some(false) {
                rejected.insert(t.id);
            }
        }
        let adopters = ranked_adopters(inst, &eval, &rejected);
        m += opts.eta;
        let stable = prev.as_ref() == Some(&sol.design);
        if k >= 2 && stable && m - opts.eta >= adopters.len() {
            break;
        }
        if opts.detect_cycles && k >= 2 && !stable && seen.contains(&sol.design) {
            break;
        }
        if k + 1 >= cap || opts.time_limit.is_some_and(|t| started.elapsed() >= t) {
            trace.truncated = true;
            break;
        }
        seen.insert(sol.design.clone());
        prev = Some(sol.design);
        t_hat = with(&core, adopters.into_iter().take(m));
    }
    Ok(best.expect("at least one iteration"))
}

/// Greedy adoption whose inner design step is a full greedy rejection run
/// seeded with the current trip set. Returns the minimum-objective design.
pub fn rho_gagr(inst: &Instance, opts: &TripOptions, fixed: &Design) -> Result<HeuristicOutcome> {
    let mut solver = DfdSolver::new(inst, opts.dfd);
    rho_gagr_with(&mut solver, opts, fixed)
}

pub fn rho_gagr_with(solver: &mut DfdSolver, opts: &TripOptions, fixed: &Design) -> Result<HeuristicOutcome> {
    opts.check()?;
    let inst = solver.instance();
    let started = Instant::now();
    let core = inst.core_trips();
    let cap = opts.max_iterations.unwrap_or(inst.latent_trips().len() / opts.rho + 10);
    let inner_opts = TripOptions { max_iterations: None, time_limit: None, ..opts.clone() };
    let mut trace = HeuristicTrace::new("gagr");
    let mut absorbed = TripSet::new();
    let mut best: Option<Best> = None;
    let mut k = 0;
    loop {
        let t_bar = with(&core, absorbed.iter().copied());
        let inner = grre_loop(solver, &inner_opts, fixed, Some(&t_bar), &mut trace, k, started)?;
        trace.push("main", k, &inner.t_hat, &inner.design, &inner.eval, started.elapsed());
        let adopters = ranked_adopters(inst, &inner.eval, &absorbed);
        Best::offer(&mut best, &inner.design, &inner.t_hat, &inner.eval);
        let stop = adopters.is_empty();
        let out_of_budget = k + 1 >= cap || opts.time_limit.is_some_and(|t| started.elapsed() >= t);
        if stop || out_of_budget {
            trace.truncated |= !stop;
            break;
        }
        absorbed.extend(adopters.into_iter().take(opts.rho));
        k += 1;
    }
    let best = best.expect("at least one iteration");
    Ok(HeuristicOutcome { design: best.design, t_hat: best.t_hat, evaluation: best.eval, trace })
}
