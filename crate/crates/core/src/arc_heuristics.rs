//! Arc-based heuristics: fix one elementary cycle of the current design at a
//! time while the evaluated objective keeps improving.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::adoption::{eval_design, DesignEvaluation};
use crate::cycles::{find_cycles, Cycle, CYCLE_CAP};
use crate::design::Design;
use crate::dfd::{DfdOptions, DfdSolver};
use crate::error::{Error, Result};
use crate::instance::{Instance, Trip, TripId, TripSet};
use crate::router::Route;
use crate::trace::{HeuristicOutcome, HeuristicTrace};

/// Which adopters an iteration adds to the trip set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ExpansionRule {
    /// Every adopter.
    A,
    /// Adopters whose shuttle cost is covered by the fare.
    B,
    /// Adopters not served by a single direct shuttle.
    C,
    /// Adopters whose travel time bound stays within their threshold.
    D,
}

impl FromStr for ExpansionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(ExpansionRule::A),
            "b" => Ok(ExpansionRule::B),
            "c" => Ok(ExpansionRule::C),
            "d" => Ok(ExpansionRule::D),
            _ => Err(Error::UnknownRule(s.to_string())),
        }
    }
}

impl fmt::Display for ExpansionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            ExpansionRule::A => "a",
            ExpansionRule::B => "b",
            ExpansionRule::C => "c",
            ExpansionRule::D => "d",
        };
        f.write_str(c)
    }
}

/// Upper bound on the travel time of `trip` under any design containing the
/// design `route` was computed for.
///
/// Uses the route's total shuttle distance against the shortest shuttle
/// distance any route can have, `min(d(o,d), min_{h,l} d(o,h) + d(l,d))`.
/// For a direct route, or a route with one shuttle leg on each end, this is
/// the usual bound with the first and last hub.
pub fn adoption_ub(trip: &Trip, route: &Route, inst: &Instance) -> Result<f64> {
    let p = inst.params();
    if p.theta <= 0.0 {
        return Err(Error::ThetaZero);
    }
    let direct = inst.dist().get(trip.origin, trip.destination);
    let floor = inst.min_hub_access(trip.origin, trip.destination).min(direct);
    let slack = (route.shuttle_km - floor).max(0.0);
    Ok(route.f + (1.0 - p.theta) / p.theta * p.omega * slack)
}

/// Latent trips selected by `rule` under the design that produced `eval`.
pub fn expand(rule: ExpansionRule, inst: &Instance, eval: &DesignEvaluation) -> Result<Vec<TripId>> {
    let mut out = Vec::new();
    for ((t, r), d) in inst.trips().iter().zip(&eval.routes).zip(&eval.adopts) {
        if *d != Some(true) {
            continue;
        }
        let keep = match rule {
            ExpansionRule::A => true,
            ExpansionRule::B => r.money <= inst.params().ticket,
            ExpansionRule::C => !r.is_direct_shuttle(),
            ExpansionRule::D => adoption_ub(t, r, inst)? <= t.time_threshold().expect("latent trip"),
        };
        if keep {
            out.push(t.id);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArcOptions {
    pub cycle_cap: usize,
    pub dfd: DfdOptions,
}

impl Default for ArcOptions {
    fn default() -> Self {
        ArcOptions { cycle_cap: CYCLE_CAP, dfd: DfdOptions::default() }
    }
}

/// One accepted cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcStep {
    pub stage: usize,
    pub cycle: Vec<usize>,
    pub objective: f64,
    pub fixed: Design,
    /// Trip set after the expansion that follows the step.
    pub t_hat: TripSet,
    /// Trips added by that expansion.
    pub expanded: Vec<TripId>,
}

/// Arc-based outcome: the usual result plus the accepted steps.
#[derive(Clone, Debug)]
pub struct ArcOutcome {
    pub outcome: HeuristicOutcome,
    pub steps: Vec<ArcStep>,
}

struct ArcState {
    fixed: Design,
    t_hat: TripSet,
    bound: f64,
    eval: Option<DesignEvaluation>,
    steps: Vec<ArcStep>,
}

pub fn arc_s1(inst: &Instance, rule: ExpansionRule, fixed_init: &Design, opts: &ArcOptions) -> Result<ArcOutcome> {
    let mut solver = DfdSolver::new(inst, opts.dfd);
    run_stages(&mut solver, &[rule], fixed_init, opts, "arc-s1")
}

/// Two stages; the first rule must not be `a`.
pub fn arc_s2(
    inst: &Instance,
    stage1: ExpansionRule,
    stage2: ExpansionRule,
    fixed_init: &Design,
    opts: &ArcOptions,
) -> Result<ArcOutcome> {
    if stage1 == ExpansionRule::A {
        return Err(Error::Parameter("the first stage of arc-s2 cannot use rule a".into()));
    }
    let mut solver = DfdSolver::new(inst, opts.dfd);
    run_stages(&mut solver, &[stage1, stage2], fixed_init, opts, "arc-s2")
}

pub fn run_stages(
    solver: &mut DfdSolver,
    rules: &[ExpansionRule],
    fixed_init: &Design,
    opts: &ArcOptions,
    name: &str,
) -> Result<ArcOutcome> {
    let inst = solver.instance();
    let fixed_init = fixed_init.union(&Design::fixed(inst));
    if !fixed_init.is_weakly_connected(inst) {
        return Err(Error::InvalidDesign("initial fixed arcs violate weak connectivity".into()));
    }
    let started = Instant::now();
    let mut trace = HeuristicTrace::new(name);
    let mut st = ArcState {
        fixed: fixed_init,
        t_hat: inst.core_trips(),
        bound: f64::INFINITY,
        eval: None,
        steps: Vec::new(),
    };
    for (i, &rule) in rules.iter().enumerate() {
        let phase = if rules.len() == 1 { "main".to_string() } else { format!("stage{}", i + 1) };
        if i > 0 {
            // a later stage first widens the trip set with its own rule
            let current = match st.eval.take() {
                Some(e) => e,
                None => eval_design(inst, &st.fixed, &st.t_hat)?,
            };
            let before = st.t_hat.len();
            st.t_hat.extend(expand(rule, inst, &current)?);
            let eval = if st.t_hat.len() == before { current } else { eval_design(inst, &st.fixed, &st.t_hat)? };
            trace.push(&phase, st.steps.len(), &st.t_hat, &st.fixed, &eval, started.elapsed());
            st.eval = Some(eval);
        }
        stage(solver, rule, i + 1, &phase, opts, &mut st, &mut trace, started)?;
    }
    let evaluation = match st.eval.take() {
        Some(e) => e,
        None => eval_design(inst, &st.fixed, &st.t_hat)?,
    };
    trace.push("final", trace.records.last().map_or(0, |r| r.outer + 1), &st.t_hat, &st.fixed, &evaluation, started.elapsed());
    Ok(ArcOutcome {
        outcome: HeuristicOutcome { design: st.fixed, t_hat: st.t_hat, evaluation, trace },
        steps: st.steps,
    })
}

#[allow(clippy::too_many_arguments)]
fn stage(
    solver: &mut DfdSolver,
    rule: ExpansionRule,
    index: usize,
    phase: &str,
    opts: &ArcOptions,
    st: &mut ArcState,
    trace: &mut HeuristicTrace,
    started: Instant,
) -> Result<()> {
    let inst = solver.instance();
    loop {
        let temp = solver.solve(&st.t_hat, &st.fixed)?.design;
        let unfixed = temp.difference(&st.fixed);
        let pairs: Vec<(usize, usize)> = unfixed.arcs().iter().map(|&a| (inst.arcs()[a].from, inst.arcs()[a].to)).collect();
        let cycles = find_cycles(&pairs, opts.cycle_cap)?;
        if cycles.is_empty() {
            return Ok(());
        }
        let candidates: Vec<(Cycle, Design)> = cycles
            .into_iter()
            .map(|c| {
                let arcs = c.arcs().into_iter().map(|(h, l)| inst.arc_id(h, l).expect("cycle on candidate arcs"));
                let d = st.fixed.union(&Design::from_arcs(arcs));
                (c, d)
            })
            .collect();
        let evals: Vec<DesignEvaluation> =
            candidates.par_iter().map(|(_, d)| eval_design(inst, d, &st.t_hat)).collect::<Result<_>>()?;
        // first strict minimum in (length, sequence) order
        let mut pick = 0;
        for i in 1..evals.len() {
            if evals[i].objective < evals[pick].objective {
                pick = i;
            }
        }
        let objective = evals[pick].objective;
        if objective >= st.bound {
            return Ok(());
        }
        let (cycle, design) = candidates.into_iter().nth(pick).expect("picked candidate");
        let chosen = evals.into_iter().nth(pick).expect("picked evaluation");
        st.bound = objective;
        st.fixed = design;
        let added = expand(rule, inst, &chosen)?;
        let expanded: Vec<TripId> = added.into_iter().filter(|id| !st.t_hat.contains(id)).collect();
        st.t_hat.extend(expanded.iter().copied());
        // score the accepted design against the trip set it hands on
        let eval = eval_design(inst, &st.fixed, &st.t_hat)?;
        let outer = st.steps.len();
        trace.push(phase, outer, &st.t_hat, &st.fixed, &eval, started.elapsed());
        st.steps.push(ArcStep {
            stage: index,
            cycle: cycle.nodes,
            objective,
            fixed: st.fixed.clone(),
            t_hat: st.t_hat.clone(),
            expanded,
        });
        st.eval = Some(eval);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::four_stop;
    use crate::router::{route, Leg, Mode};

    #[test]
    fn parses_rules() {
        assert_eq!("a".parse::<ExpansionRule>().unwrap(), ExpansionRule::A);
        assert_eq!(" D".parse::<ExpansionRule>().unwrap(), ExpansionRule::D);
        assert!(matches!("e".parse::<ExpansionRule>(), Err(Error::UnknownRule(_))));
        assert_eq!(ExpansionRule::C.to_string(), "c");
    }

    #[test]
    fn ub_multimodal_through_closest_hubs() {
        let inst = four_stop(2.0, vec![]);
        let z = Design::from_arcs([inst.arc_id(1, 2).unwrap()]);
        let t = &inst.trips()[0];
        let r = route(&inst, t, &z).unwrap();
        assert_eq!(r.f, 24.0);
        assert_eq!(adoption_ub(t, &r, &inst).unwrap(), 24.0);
    }

    #[test]
    fn ub_direct_shuttle() {
        let inst = four_stop(2.0, vec![]);
        let t = &inst.trips()[0];
        let legs = vec![Leg { mode: Mode::Shuttle, from: 0, to: 3 }];
        let mut r = Route::from_legs(&inst, legs);
        r.f = 25.0;
        assert_eq!(adoption_ub(t, &r, &inst).unwrap(), 33.5);
    }
}
