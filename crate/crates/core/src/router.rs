//! Follower routing: lexicographic shortest paths over shuttle and bus legs.
//!
//! Routes minimise the weighted cost `g` first and the travel time `f`
//! second. Remaining ties go to the route with fewer legs, then to the
//! smaller stop sequence, then to the smaller mode sequence (bus before
//! shuttle). Every arc adds one leg, so the combined key grows strictly along
//! any path and dense label setting is exact.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::design::Design;
use crate::error::{Error, Result};
use crate::instance::{ArcId, Instance, StopIdx, Trip};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Bus,
    Shuttle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Leg {
    pub mode: Mode,
    pub from: StopIdx,
    pub to: StopIdx,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Route {
    pub legs: Vec<Leg>,
    /// Weighted cost and inconvenience.
    pub g: f64,
    /// Travel time in minutes, bus waits included.
    pub f: f64,
    /// Shuttle operating cost in dollars.
    pub money: f64,
    pub shuttle_km: f64,
}

impl Route {
    /// A single shuttle leg from origin to destination.
    pub fn is_direct_shuttle(&self) -> bool {
        self.legs.len() == 1 && self.legs[0].mode == Mode::Shuttle
    }

    pub fn uses_bus(&self) -> bool {
        self.legs.iter().any(|l| l.mode == Mode::Bus)
    }

    /// Candidate arcs ridden by bus.
    pub fn bus_arcs<'a>(&'a self, inst: &'a Instance) -> impl Iterator<Item = ArcId> + 'a {
        self.legs
            .iter()
            .filter(|l| l.mode == Mode::Bus)
            .map(|l| inst.arc_id(l.from, l.to).expect("bus leg on a candidate arc"))
    }

    /// Stops visited, origin first.
    pub fn stops(&self) -> Vec<StopIdx> {
        let mut s = Vec::with_capacity(self.legs.len() + 1);
        if let Some(first) = self.legs.first() {
            s.push(first.from);
        }
        s.extend(self.legs.iter().map(|l| l.to));
        s
    }

    /// Builds a route from its legs, accumulating costs in leg order.
    pub fn from_legs(inst: &Instance, legs: Vec<Leg>) -> Route {
        let w = inst.weights();
        let p = inst.params();
        let (mut g, mut f, mut km) = (0.0, 0.0, 0.0);
        for leg in &legs {
            match leg.mode {
                Mode::Shuttle => {
                    g += w.gamma.get(leg.from, leg.to);
                    f += inst.time().get(leg.from, leg.to);
                    km += inst.dist().get(leg.from, leg.to);
                }
                Mode::Bus => {
                    let a = inst.arc_id(leg.from, leg.to).expect("bus leg on a candidate arc");
                    g += w.tau[a];
                    f += w.bus_minutes[a];
                }
            }
        }
        Route { legs, g, f, money: p.omega * km, shuttle_km: km }
    }
}

/// Hub-to-hub shuttle legs are only usable when the instance allows them,
/// except as the single leg of a direct trip between two hubs.
#[inline]
pub(crate) fn shuttle_allowed(inst: &Instance, from: StopIdx, to: StopIdx, trip: (StopIdx, StopIdx)) -> bool {
    from != to
        && (inst.params().shuttle_between_hubs
            || !(inst.is_hub(from) && inst.is_hub(to))
            || (from, to) == trip)
}

/// Bus adjacency for one design.
#[derive(Clone, Debug)]
pub struct Network<'a> {
    inst: &'a Instance,
    bus_out: Vec<Vec<(StopIdx, ArcId)>>,
    bus_in: Vec<Vec<(StopIdx, ArcId)>>,
}

#[derive(Clone, Copy)]
struct Label {
    g: f64,
    f: f64,
    legs: u32,
}

impl Label {
    #[inline]
    fn key_cmp(&self, other: &Label) -> Ordering {
        self.g
            .total_cmp(&other.g)
            .then(self.f.total_cmp(&other.f))
            .then(self.legs.cmp(&other.legs))
    }
}

impl<'a> Network<'a> {
    pub fn new(inst: &'a Instance, design: &Design) -> Self {
        let n = inst.stop_count();
        let mut bus_out = vec![Vec::new(); n];
        let mut bus_in = vec![Vec::new(); n];
        for &a in design.arcs() {
            let arc = inst.arcs()[a];
            bus_out[arc.from].push((arc.to, a));
            bus_in[arc.to].push((arc.from, a));
        }
        Network { inst, bus_out, bus_in }
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn route(&self, trip: &Trip) -> Result<Route> {
        self.route_od(trip.origin, trip.destination)
    }

    /// Lexicographically minimal route between two stops.
    pub fn route_od(&self, origin: StopIdx, destination: StopIdx) -> Result<Route> {
        let inst = self.inst;
        let w = inst.weights();
        let time = inst.time();
        let n = inst.stop_count();
        let mut label: Vec<Option<Label>> = vec![None; n];
        let mut pred: Vec<Option<(StopIdx, Mode)>> = vec![None; n];
        let mut settled = vec![false; n];
        label[origin] = Some(Label { g: 0.0, f: 0.0, legs: 0 });

        loop {
            let mut best: Option<(StopIdx, Label)> = None;
            for (v, lab) in label.iter().enumerate() {
                if settled[v] {
                    continue;
                }
                if let Some(l) = lab {
                    if best.is_none_or(|(_, b)| l.key_cmp(&b) == Ordering::Less) {
                        best = Some((v, *l));
                    }
                }
            }
            let Some((u, lu)) = best else { break };
            settled[u] = true;
            if u == destination {
                break;
            }

            let gamma = w.gamma.row(u);
            let trow = time.row(u);
            for v in 0..n {
                if settled[v] || !shuttle_allowed(inst, u, v, (origin, destination)) {
                    continue;
                }
                let cand = Label { g: lu.g + gamma[v], f: lu.f + trow[v], legs: lu.legs + 1 };
                self.relax(&mut label, &mut pred, u, v, Mode::Shuttle, cand);
            }
            for &(v, a) in &self.bus_out[u] {
                if settled[v] {
                    continue;
                }
                let cand = Label { g: lu.g + w.tau[a], f: lu.f + w.bus_minutes[a], legs: lu.legs + 1 };
                self.relax(&mut label, &mut pred, u, v, Mode::Bus, cand);
            }
        }

        if !settled[destination] {
            return Err(Error::Unreachable { origin, destination });
        }
        let legs = path_legs(&pred, destination);
        let route = Route::from_legs(inst, legs);
        debug_assert_eq!(route.g, label[destination].unwrap().g);
        Ok(route)
    }

    fn relax(
        &self,
        label: &mut [Option<Label>],
        pred: &mut [Option<(StopIdx, Mode)>],
        u: StopIdx,
        v: StopIdx,
        mode: Mode,
        cand: Label,
    ) {
        let replace = match label[v] {
            None => true,
            Some(cur) => match cand.key_cmp(&cur) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => {
                    let mut challenger = path_legs(pred, u);
                    challenger.push(Leg { mode, from: u, to: v });
                    compare_leg_sequences(&challenger, &path_legs(pred, v)) == Ordering::Less
                }
            },
        };
        if replace {
            label[v] = Some(cand);
            pred[v] = Some((u, mode));
        }
    }

    /// Minimum weighted cost from every stop to `destination`.
    ///
    /// Uses the same arc set as [`Network::route_od`] for the trip
    /// `(origin, destination)`; these are the dual potentials of the routing
    /// problem.
    pub fn costs_to(&self, origin: StopIdx, destination: StopIdx) -> Vec<f64> {
        let inst = self.inst;
        let w = inst.weights();
        let n = inst.stop_count();
        let mut cost = vec![f64::INFINITY; n];
        let mut settled = vec![false; n];
        cost[destination] = 0.0;
        loop {
            let mut best = None;
            let mut best_cost = f64::INFINITY;
            for v in 0..n {
                if !settled[v] && cost[v] < best_cost {
                    best_cost = cost[v];
                    best = Some(v);
                }
            }
            let Some(v) = best else { break };
            settled[v] = true;
            for u in 0..n {
                if settled[u] || !shuttle_allowed(inst, u, v, (origin, destination)) {
                    continue;
                }
                let c = best_cost + w.gamma.get(u, v);
                if c < cost[u] {
                    cost[u] = c;
                }
            }
            for &(u, a) in &self.bus_in[v] {
                if settled[u] {
                    continue;
                }
                let c = best_cost + w.tau[a];
                if c < cost[u] {
                    cost[u] = c;
                }
            }
        }
        cost
    }
}

impl Network<'_> {
    /// Minimum weighted cost from `origin` to every stop, over the arc set
    /// of the trip `(origin, destination)`.
    pub fn costs_from(&self, origin: StopIdx, destination: StopIdx) -> Vec<f64> {
        let inst = self.inst;
        let w = inst.weights();
        let n = inst.stop_count();
        let mut cost = vec![f64::INFINITY; n];
        let mut settled = vec![false; n];
        cost[origin] = 0.0;
        loop {
            let mut best = None;
            let mut best_cost = f64::INFINITY;
            for v in 0..n {
                if !settled[v] && cost[v] < best_cost {
                    best_cost = cost[v];
                    best = Some(v);
                }
            }
            let Some(u) = best else { break };
            settled[u] = true;
            let gamma = w.gamma.row(u);
            for v in 0..n {
                if settled[v] || !shuttle_allowed(inst, u, v, (origin, destination)) {
                    continue;
                }
                let c = best_cost + gamma[v];
                if c < cost[v] {
                    cost[v] = c;
                }
            }
            for &(v, a) in &self.bus_out[u] {
                if settled[v] {
                    continue;
                }
                let c = best_cost + w.tau[a];
                if c < cost[v] {
                    cost[v] = c;
                }
            }
        }
        cost
    }
}

fn path_legs(pred: &[Option<(StopIdx, Mode)>], mut v: StopIdx) -> Vec<Leg> {
    let mut legs = Vec::new();
    while let Some((u, mode)) = pred[v] {
        legs.push(Leg { mode, from: u, to: v });
        v = u;
    }
    legs.reverse();
    legs
}

/// Tie-break order for routes of equal `(g, f)`: fewer legs, then stop
/// sequence, then mode sequence.
pub fn compare_leg_sequences(a: &[Leg], b: &[Leg]) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| {
            let sa = a.iter().map(|l| (l.from, l.to));
            let sb = b.iter().map(|l| (l.from, l.to));
            sa.cmp(sb)
        })
        .then_with(|| a.iter().map(|l| l.mode).cmp(b.iter().map(|l| l.mode)))
}

/// Routes one trip under a design.
pub fn route(inst: &Instance, trip: &Trip, design: &Design) -> Result<Route> {
    Network::new(inst, design).route(trip)
}

/// Routes every trip, preserving order. Runs on the current rayon pool.
pub fn route_batch(inst: &Instance, trips: &[&Trip], design: &Design) -> Result<Vec<Route>> {
    let net = Network::new(inst, design);
    trips.par_iter().map(|t| net.route(t)).collect()
}

/// True when no hub detour can beat the direct shuttle distance, in which
/// case the trip is served by a direct shuttle under every design.
pub fn is_direct_trip(trip: &Trip, inst: &Instance) -> bool {
    inst.min_hub_access(trip.origin, trip.destination) >= inst.dist().get(trip.origin, trip.destination)
}
