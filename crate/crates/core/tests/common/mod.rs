//! Independent oracles and instance suites shared by the integration tests.
#![allow(dead_code)]

use std::cmp::Ordering;

use odmts::router::{Leg, Mode};
use odmts::{generate_synthetic, Design, GeneratorConfig, Instance, StopIdx, Trip};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random small instance: `hubs` hubs, up to `max_stops` stops, a handful
/// of trips, cheap enough buses that designs are not trivially empty.
pub fn small_instance(seed: u64, hubs: usize, max_stops: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let stops = rng.gen_range((hubs + 2).min(max_stops)..=max_stops);
    let mut cfg = GeneratorConfig::tiny(stops, hubs, rng.gen_range(2..=6), rng.gen_range(3..=10));
    cfg.buses_per_leg = [0.05, 0.1, 0.25, 0.5][rng.gen_range(0..4)];
    cfg.theta = [0.001, 0.1, 0.5][rng.gen_range(0..3)];
    cfg.shuttle_between_hubs = rng.gen_bool(0.2);
    generate_synthetic(&cfg, seed).expect("valid small instance")
}

/// The 3-hub suite used for heuristic-versus-exact comparisons.
pub fn three_hub_suite(count: usize) -> Vec<Instance> {
    (0..count as u64).map(|s| small_instance(1000 + s, 3, 9)).collect()
}

/// The 3 and 4 hub suite used for fixed-demand oracle checks.
pub fn dfd_suite(count: usize) -> Vec<Instance> {
    (0..count as u64).map(|s| small_instance(2000 + s, 3 + (s as usize % 2), 10)).collect()
}

/// Random subset of the candidate arcs (not necessarily balanced).
pub fn random_design(inst: &Instance, rng: &mut ChaCha8Rng, p: f64) -> Design {
    Design::from_arcs((0..inst.arcs().len()).filter(|_| rng.gen_bool(p)))
}

#[derive(Clone, Debug)]
pub struct OraclePath {
    pub legs: Vec<Leg>,
    pub g: f64,
    pub f: f64,
}

fn shuttle_ok(inst: &Instance, a: StopIdx, b: StopIdx, od: (StopIdx, StopIdx)) -> bool {
    a != b && (inst.params().shuttle_between_hubs || !(inst.is_hub(a) && inst.is_hub(b)) || (a, b) == od)
}

fn leg_cost(inst: &Instance, leg: &Leg) -> (f64, f64) {
    let w = inst.weights();
    match leg.mode {
        Mode::Shuttle => (w.gamma.get(leg.from, leg.to), inst.time().get(leg.from, leg.to)),
        Mode::Bus => {
            let a = inst.arc_id(leg.from, leg.to).unwrap();
            (w.tau[a], w.bus_minutes[a])
        }
    }
}

/// Canonical order: g, then f, then fewer legs, then stop sequence, then
/// mode sequence with bus first.
pub fn canonical_cmp(a: &OraclePath, b: &OraclePath) -> Ordering {
    let stops = |p: &OraclePath| -> Vec<StopIdx> {
        let mut s = vec![p.legs[0].from];
        s.extend(p.legs.iter().map(|l| l.to));
        s
    };
    let modes = |p: &OraclePath| -> Vec<u8> {
        p.legs.iter().map(|l| if l.mode == Mode::Bus { 0 } else { 1 }).collect()
    };
    a.g.total_cmp(&b.g)
        .then(a.f.total_cmp(&b.f))
        .then(a.legs.len().cmp(&b.legs.len()))
        .then_with(|| stops(a).cmp(&stops(b)))
        .then_with(|| modes(a).cmp(&modes(b)))
}

/// Exhaustive enumeration of simple paths; returns the canonical best.
pub fn brute_force_route(inst: &Instance, design: &Design, trip: &Trip) -> OraclePath {
    let od = (trip.origin, trip.destination);
    let n = inst.stop_count();
    let mut best: Option<OraclePath> = None;
    let mut visited = vec![false; n];
    let mut legs: Vec<Leg> = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        inst: &Instance,
        design: &Design,
        od: (StopIdx, StopIdx),
        u: StopIdx,
        visited: &mut Vec<bool>,
        legs: &mut Vec<Leg>,
        best: &mut Option<OraclePath>,
    ) {
        if u == od.1 {
            let (mut g, mut f) = (0.0, 0.0);
            for l in legs.iter() {
                let (lg, lf) = leg_cost(inst, l);
                g += lg;
                f += lf;
            }
            let cand = OraclePath { legs: legs.clone(), g, f };
            if best.as_ref().is_none_or(|b| canonical_cmp(&cand, b) == Ordering::Less) {
                *best = Some(cand);
            }
            return;
        }
        for v in 0..inst.stop_count() {
            if visited[v] {
                continue;
            }
            let mut options = Vec::new();
            if let Some(a) = inst.arc_id(u, v) {
                if design.contains(a) {
                    options.push(Mode::Bus);
                }
            }
            if shuttle_ok(inst, u, v, od) {
                options.push(Mode::Shuttle);
            }
            for mode in options {
                visited[v] = true;
                legs.push(Leg { mode, from: u, to: v });
                dfs(inst, design, od, v, visited, legs, best);
                legs.pop();
                visited[v] = false;
            }
        }
    }

    visited[trip.origin] = true;
    dfs(inst, design, od, trip.origin, &mut visited, &mut legs, &mut best);
    best.expect("the direct shuttle always exists")
}

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

/// Random design made of arcs paired with their reverses, hence balanced.
pub fn random_symmetric_design(inst: &Instance, rng: &mut ChaCha8Rng, p: f64) -> Design {
    let mut arcs = Vec::new();
    for (a, arc) in inst.arcs().iter().enumerate() {
        if arc.from < arc.to && rng.gen_bool(p) {
            arcs.push(a);
            arcs.extend(inst.arc_id(arc.to, arc.from));
        }
    }
    Design::from_arcs(arcs)
}
