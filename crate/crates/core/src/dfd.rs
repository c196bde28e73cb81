//! Exact design for a fixed trip set by Benders decomposition.
//!
//! Each round solves the master over the current cuts, routes every trip
//! under the master design and adds one optimality cut per trip. The cut of
//! trip `r` built at design `z` comes from the shortest-path potentials
//! `b(.)` towards `r`'s destination under `z`:
//!
//! ```text
//! g_r(z') >= b(o_r) - sum_{(h,l) in z'} max(0, b(h) - tau_hl - b(l))
//! ```
//!
//! It is tight at `z` and valid for every design. The loop stops once the
//! true objective of the master design meets the master bound.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::design::{enumerate_designs, Design};
use crate::error::{Error, Result};
use crate::instance::{ArcId, Instance, Trip, TripId, TripSet};
use crate::master::{probe_master, MasterTrip};
use crate::router::{Network, Route};
use crate::tol;

/// `g_trip(z) >= base - sum_{a in z} coeff_a`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BendersCut {
    pub trip: TripId,
    pub base: f64,
    /// Sorted by arc, strictly positive.
    pub coeffs: Vec<(ArcId, f64)>,
}

impl BendersCut {
    /// Right-hand side of the cut at `design`.
    pub fn rhs(&self, design: &Design) -> f64 {
        let mut v = self.base;
        for &(a, k) in &self.coeffs {
            if design.contains(a) {
                v -= k;
            }
        }
        v
    }

    fn key(&self) -> (TripId, u64, Vec<(ArcId, u64)>) {
        (self.trip, self.base.to_bits(), self.coeffs.iter().map(|&(a, k)| (a, k.to_bits())).collect())
    }
}

/// Builds the optimality cut of `trip` at `design`.
pub fn make_cut(inst: &Instance, trip: &Trip, design: &Design) -> BendersCut {
    let net = Network::new(inst, design);
    let b = net.costs_to(trip.origin, trip.destination);
    cut_from_potentials(inst, trip, &b, design)
}

fn cut_from_potentials(inst: &Instance, trip: &Trip, b: &[f64], design: &Design) -> BendersCut {
    let tau = &inst.weights().tau;
    let mut coeffs = Vec::new();
    for (a, arc) in inst.arcs().iter().enumerate() {
        if design.contains(a) {
            continue;
        }
        let k = b[arc.from] - tau[a] - b[arc.to];
        if k > 0.0 {
            coeffs.push((a, k));
        }
    }
    BendersCut { trip: trip.id, base: b[trip.origin], coeffs }
}

/// Trip, base bits and coefficient bits.
type CutKey = (TripId, u64, Vec<(ArcId, u64)>);

/// Cuts grouped by trip, without duplicates.
#[derive(Clone, Debug, Default)]
pub struct CutPool {
    by_trip: BTreeMap<TripId, Vec<BendersCut>>,
    seen: HashSet<CutKey>,
}

impl CutPool {
    /// Adds a cut; false when an identical cut is already present.
    pub fn add(&mut self, cut: BendersCut) -> bool {
        if !self.seen.insert(cut.key()) {
            return false;
        }
        self.by_trip.entry(cut.trip).or_default().push(cut);
        true
    }

    pub fn cuts(&self, trip: TripId) -> &[BendersCut] {
        self.by_trip.get(&trip).map_or(&[], |v| v.as_slice())
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DfdOptions {
    /// Relative optimality gap.
    pub gap: f64,
    pub max_rounds: usize,
}

impl Default for DfdOptions {
    fn default() -> Self {
        DfdOptions { gap: crate::OBJ_TOL, max_rounds: 200 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRecord {
    pub round: usize,
    pub lower: f64,
    pub upper: f64,
    pub open_arcs: usize,
    pub cuts_added: usize,
    pub master_nodes: u64,
}

#[derive(Clone, Debug)]
pub struct DfdSolution {
    pub design: Design,
    pub objective: f64,
    /// Trip ids in ascending order, aligned with `routes`.
    pub trips: Vec<TripId>,
    pub routes: Vec<Route>,
    pub bound_log: Vec<BoundRecord>,
    pub iterations: usize,
}

impl DfdSolution {
    /// Bound log as CSV.
    pub fn bound_log_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.bound_log {
            w.serialize(r).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv")
    }
}

/// Design objective of `design` for `trips`, with the routes that realise it.
pub fn dfd_objective(inst: &Instance, trips: &[&Trip], design: &Design) -> Result<(f64, Vec<Route>)> {
    let net = Network::new(inst, design);
    let routes: Vec<Route> = trips.par_iter().map(|t| net.route(t)).collect::<Result<_>>()?;
    let beta = &inst.weights().beta;
    let mut v: f64 = design.arcs().iter().map(|&a| beta[a]).sum();
    for (t, r) in trips.iter().zip(&routes) {
        v += t.weight() * r.g;
    }
    Ok((v, routes))
}

/// Reusable solver that keeps its cut pool and solved trip sets between
/// calls. Heuristics solve many nested trip sets on the same instance, and
/// every cut stays valid across them.
pub struct DfdSolver<'a> {
    inst: &'a Instance,
    options: DfdOptions,
    pool: CutPool,
    memo: HashMap<(Vec<TripId>, Design), DfdSolution>,
    /// Per trip position: whether the trip takes the direct shuttle under
    /// every design.
    constant: Vec<Option<bool>>,
    /// Recent optimal designs, used as warm starts.
    history: Vec<Design>,
    solves: usize,
}

const HISTORY: usize = 8;

impl<'a> DfdSolver<'a> {
    pub fn new(inst: &'a Instance, options: DfdOptions) -> Self {
        DfdSolver {
            inst,
            options,
            pool: CutPool::default(),
            memo: HashMap::new(),
            constant: vec![None; inst.trips().len()],
            history: Vec::new(),
            solves: 0,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn pool(&self) -> &CutPool {
        &self.pool
    }

    /// Number of Benders runs performed, excluding memoised answers.
    pub fn solves(&self) -> usize {
        self.solves
    }

    fn is_constant(&mut self, trip: &Trip) -> Result<bool> {
        let pos = self.inst.trip_position(trip.id).ok_or(Error::UnknownTrip(trip.id))?;
        if let Some(c) = self.constant[pos] {
            return Ok(c);
        }
        // Under the full design every bus option is available; if the direct
        // shuttle still wins, it wins under every subset too.
        let full = Design::full(self.inst);
        let r = Network::new(self.inst, &full).route(trip)?;
        let c = r.is_direct_shuttle();
        self.constant[pos] = Some(c);
        Ok(c)
    }

    pub fn solve(&mut self, trips: &TripSet, fixed: &Design) -> Result<DfdSolution> {
        let inst = self.inst;
        let fixed = fixed.union(&Design::fixed(inst));
        if !fixed.is_weakly_connected(inst) {
            return Err(Error::InvalidDesign("fixed arcs violate weak connectivity".into()));
        }
        let ids: Vec<TripId> = trips.iter().copied().collect();
        let key = (ids.clone(), fixed.clone());
        if let Some(sol) = self.memo.get(&key) {
            return Ok(sol.clone());
        }

        let mut all = Vec::with_capacity(ids.len());
        let mut active = Vec::new();
        let mut offset = 0.0;
        for &id in &ids {
            let trip = inst.trip(id).ok_or(Error::UnknownTrip(id))?;
            all.push(trip);
            if self.is_constant(trip)? {
                offset += trip.weight() * inst.weights().gamma.get(trip.origin, trip.destination);
            } else {
                active.push(trip);
            }
        }

        let mut bound_log = Vec::new();
        let mut iterations = 0;
        let design = if active.is_empty() {
            fixed.clone()
        } else {
            self.solves += 1;
            let (design, log) = self.benders(&active, &fixed, offset)?;
            iterations = log.len();
            bound_log = log;
            design
        };
        if !self.history.contains(&design) {
            self.history.push(design.clone());
            if self.history.len() > HISTORY {
                self.history.remove(0);
            }
        }

        let (objective, routes) = dfd_objective(inst, &all, &design)?;
        let sol = DfdSolution { design, objective, trips: ids, routes, bound_log, iterations };
        self.memo.insert(key, sol.clone());
        Ok(sol)
    }
}

impl DfdSolver<'_> {
    /// Routes every active trip under `z`, stores the cuts and returns the
    /// active objective with the number of new cuts.
    ///
    /// Cuts are generated for every design-dependent trip of the instance,
    /// so later solves on larger trip sets start with a populated pool.
    fn evaluate(&mut self, active: &[&Trip], z: &Design) -> Result<(f64, usize)> {
        let inst = self.inst;
        let mut targets = Vec::with_capacity(inst.trips().len());
        for t in inst.trips() {
            if !self.is_constant(t)? {
                targets.push(t);
            }
        }
        let net = Network::new(inst, z);
        let pots: Vec<(TripId, f64, [BendersCut; 2])> = targets
            .par_iter()
            .map(|t| {
                let b = net.costs_to(t.origin, t.destination);
                let g = b[t.origin];
                let low: Vec<f64> = net.costs_from(t.origin, t.destination).iter().map(|a| g - a).collect();
                (t.id, g, [cut_from_potentials(inst, t, &b, z), cut_from_potentials(inst, t, &low, z)])
            })
            .collect();
        let cost: HashMap<TripId, f64> = pots.iter().map(|(id, g, _)| (*id, *g)).collect();
        let beta = &inst.weights().beta;
        let mut value: f64 = z.arcs().iter().map(|&a| beta[a]).sum();
        for t in active {
            value += t.weight() * cost[&t.id];
        }
        let added = pots.into_iter().flat_map(|(_, _, cuts)| cuts).filter(|cut| self.pool.add(cut.clone())).count();
        Ok((value, added))
    }

    /// Benders loop over the trips whose cost depends on the design.
    ///
    /// Starts from the fixed design and earlier optima. Each later round
    /// searches the master for any design that could beat the incumbent;
    /// when none exists the incumbent is optimal.
    fn benders(&mut self, active: &[&Trip], fixed: &Design, offset: f64) -> Result<(Design, Vec<BoundRecord>)> {
        let inst = self.inst;
        let opts = self.options;
        let mut log = Vec::new();
        let beta = &inst.weights().beta;
        let mut lower: f64 = fixed.arcs().iter().map(|&a| beta[a]).sum();
        let mut best: Option<(f64, Design)> = None;

        // The full design gives every trip a constant floor cut.
        let mut starts = vec![fixed.clone(), Design::full(inst)];
        for d in &self.history {
            if fixed.is_subset(d) && !starts.contains(d) {
                starts.push(d.clone());
            }
        }
        for z in starts {
            let (value, added) = self.evaluate(active, &z)?;
            if is_better(value, &z, best.as_ref()) {
                best = Some((value, z.clone()));
            }
            let upper = best.as_ref().expect("just set").0;
            log.push(BoundRecord {
                round: log.len() + 1,
                lower: lower + offset,
                upper: upper + offset,
                open_arcs: z.len(),
                cuts_added: added,
                master_nodes: 0,
            });
        }

        loop {
            let (value, incumbent) = best.clone().expect("at least one start");
            if log.len() >= opts.max_rounds {
                return Err(Error::IterationCap {
                    rounds: opts.max_rounds,
                    best_objective: value + offset,
                    gap: (value - lower) / (value + offset).abs().max(1.0),
                    best: Some(Box::new(incumbent)),
                });
            }
            let rows: Vec<MasterTrip> = active
                .iter()
                .map(|t| MasterTrip { weight: t.weight(), cuts: self.pool.cuts(t.id).iter().collect() })
                .collect();
            let slack = (opts.gap - crate::OBJ_TOL).max(0.0) * value.abs().max(1.0);
            let probe = probe_master(inst, &rows, fixed, (value - slack, &incumbent));
            drop(rows);
            lower = lower.max(probe.bound);
            match probe.found {
                None => {
                    log.push(BoundRecord {
                        round: log.len() + 1,
                        lower: lower + offset,
                        upper: value + offset,
                        open_arcs: incumbent.len(),
                        cuts_added: 0,
                        master_nodes: probe.nodes,
                    });
                    return Ok((incumbent, log));
                }
                Some(z) => {
                    let (v, added) = self.evaluate(active, &z)?;
                    if is_better(v, &z, best.as_ref()) {
                        best = Some((v, z.clone()));
                    }
                    log.push(BoundRecord {
                        round: log.len() + 1,
                        lower: lower + offset,
                        upper: best.as_ref().expect("set").0 + offset,
                        open_arcs: z.len(),
                        cuts_added: added,
                        master_nodes: probe.nodes,
                    });
                }
            }
        }
    }
}

fn is_better(value: f64, design: &Design, best: Option<&(f64, Design)>) -> bool {
    match best {
        None => true,
        Some((v, d)) => value < *v - tol(*v) || (value <= *v + tol(*v) && design < d),
    }
}

/// Solves the design problem for a fixed trip set.
pub fn solve_dfd(inst: &Instance, trips: &TripSet, fixed: &Design) -> Result<DfdSolution> {
    DfdSolver::new(inst, DfdOptions::default()).solve(trips, fixed)
}

/// Exhaustive oracle: evaluates every weakly-connected design containing
/// `fixed` and returns the best, ties broken towards the shortlex-smallest.
pub fn enumerate_dfd(inst: &Instance, trips: &TripSet, fixed: &Design) -> Result<DfdSolution> {
    let fixed = fixed.union(&Design::fixed(inst));
    let list: Vec<&Trip> = trips
        .iter()
        .map(|&id| inst.trip(id).ok_or(Error::UnknownTrip(id)))
        .collect::<Result<_>>()?;
    let designs = enumerate_designs(inst, &fixed)?;
    if designs.is_empty() {
        return Err(Error::InvalidDesign("fixed arcs violate weak connectivity".into()));
    }
    let mut values = Vec::with_capacity(designs.len());
    for d in &designs {
        values.push(dfd_objective(inst, &list, d)?.0);
    }
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let idx = values.iter().position(|&v| v <= min + tol(min)).expect("non-empty");
    let design = designs[idx].clone();
    let (objective, routes) = dfd_objective(inst, &list, &design)?;
    Ok(DfdSolution {
        design,
        objective,
        trips: trips.iter().copied().collect(),
        routes,
        bound_log: vec![],
        iterations: 0,
    })
}
