//! Acceptance suite. Prints one line per criterion and fails if any
//! criterion fails.
//!
//! ```text
//! cargo test --release --test acceptance
//! ```

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use odmts::adoption::eval_design;
use odmts::arc_heuristics::{arc_s1, arc_s2, ArcOptions, ArcOutcome, ExpansionRule};
use odmts::harness::{run_algorithm, Algorithm, RunParams};
use odmts::{
    adoption_ub, enumerate_designs, enumerate_dfd, generate_synthetic, is_direct_trip, route, solve_dfd, Design,
    DfdOptions, DfdSolver, GeneratorConfig, HeuristicOutcome, Instance, TripSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{brute_force_route, close, dfd_suite, random_design, small_instance, three_hub_suite};

/// Relative tolerance for objective and cost comparisons.
const REL_TOL: f64 = 1e-9;
/// Additive slack for cut validity and travel-time bounds, relative.
const BOUND_TOL: f64 = 1e-9;

const ROUTER_INSTANCES: u64 = 200;
const ROUTER_BUDGET: Duration = Duration::from_secs(30);
const DFD_INSTANCES: usize = 50;
const DFD_BUDGET: Duration = Duration::from_secs(120);
const MONOTONE_PAIRS: usize = 500;
const AGGREGATE_PAIRS: usize = 50;
const UB_CASES: usize = 1000;
const TINY_SUITE: usize = 50;
const DESK_BUDGET: Duration = Duration::from_secs(300);

type Criterion = (u32, &'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "router oracle equivalence", c01_router),
        (2, "fixed-demand oracle equivalence", c02_dfd),
        (3, "benders cut validity", c03_cuts),
        (4, "direct trips stay direct", c04_direct),
        (5, "monotonicity", c05_monotone),
        (6, "travel-time bound soundness", c06_ub),
        (7, "structural guarantees", c07_structure),
        (8, "exact dominance", c08_exact),
        (9, "desk-scale benchmark", c09_desk),
        (10, "determinism", c10_determinism),
    ];
    let filter: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (id, name, run) in criteria {
        if filter.is_some_and(|f| f != id) {
            continue;
        }
        let started = Instant::now();
        let v = run();
        let mark = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} [{mark}] {name} ({:.1}s): {}", started.elapsed().as_secs_f64(), v.detail);
        if !v.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

fn c01_router() -> Verdict {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut checked, mut cost_bad, mut legs_bad) = (0, 0, 0);
    for seed in 0..ROUTER_INSTANCES {
        let hubs = rng.gen_range(1..=3);
        let inst = small_instance(seed, hubs, 8);
        let z = random_design(&inst, &mut rng, 0.5);
        for t in inst.trips() {
            let r = route(&inst, t, &z).unwrap();
            let o = brute_force_route(&inst, &z, t);
            checked += 1;
            if r.g != o.g || r.f != o.f {
                cost_bad += 1;
            }
            if r.legs != o.legs {
                legs_bad += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    verdict(
        cost_bad == 0 && legs_bad == 0 && elapsed < ROUTER_BUDGET,
        format!(
            "{checked} trips on {ROUTER_INSTANCES} instances, {cost_bad} (g,f) mismatches, {legs_bad} leg mismatches, {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn c02_dfd() -> Verdict {
    let started = Instant::now();
    let (mut obj_bad, mut design_bad, mut open) = (0, 0, 0);
    for inst in dfd_suite(DFD_INSTANCES) {
        let trips = inst.all_trips();
        let fast = solve_dfd(&inst, &trips, &Design::empty()).unwrap();
        let slow = enumerate_dfd(&inst, &trips, &Design::empty()).unwrap();
        if !close(fast.objective, slow.objective, REL_TOL) {
            obj_bad += 1;
        }
        if fast.design != slow.design {
            design_bad += 1;
        }
        if !slow.design.is_empty() {
            open += 1;
        }
    }
    let elapsed = started.elapsed();
    verdict(
        obj_bad == 0 && design_bad == 0 && elapsed < DFD_BUDGET,
        format!(
            "{DFD_INSTANCES} instances ({open} with open arcs), {obj_bad} objective and {design_bad} design mismatches, {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn c03_cuts() -> Verdict {
    let (mut cuts, mut checks, mut violations) = (0usize, 0usize, 0usize);
    for inst in dfd_suite(DFD_INSTANCES) {
        let mut solver = DfdSolver::new(&inst, DfdOptions::default());
        solver.solve(&inst.core_trips(), &Design::empty()).unwrap();
        solver.solve(&inst.all_trips(), &Design::empty()).unwrap();
        let designs = enumerate_designs(&inst, &Design::empty()).unwrap();
        for t in inst.trips() {
            let pool = solver.pool().cuts(t.id);
            cuts += pool.len();
            for z in &designs {
                let g = route(&inst, t, z).unwrap().g;
                for cut in pool {
                    let rhs = cut.rhs(z);
                    checks += 1;
                    if g < rhs - BOUND_TOL * rhs.abs().max(1.0) {
                        violations += 1;
                    }
                }
            }
        }
    }
    verdict(violations == 0, format!("{cuts} cuts, {checks} (cut, design) checks, {violations} violations"))
}

fn c04_direct() -> Verdict {
    let (mut flagged, mut checks, mut violations) = (0, 0, 0);
    for inst in dfd_suite(DFD_INSTANCES) {
        let designs = enumerate_designs(&inst, &Design::empty()).unwrap();
        for t in inst.trips().iter().filter(|t| is_direct_trip(t, &inst)) {
            flagged += 1;
            for z in &designs {
                checks += 1;
                if !route(&inst, t, z).unwrap().is_direct_shuttle() {
                    violations += 1;
                }
            }
        }
    }
    verdict(
        violations == 0 && flagged > 0,
        format!("{flagged} direct trips, {checks} (trip, design) checks, {violations} violations"),
    )
}

fn c05_monotone() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let suite = dfd_suite(DFD_INSTANCES);
    let mut trip_bad = 0;
    for i in 0..MONOTONE_PAIRS {
        let inst = &suite[i % suite.len()];
        let z1 = random_design(inst, &mut rng, 0.3);
        let z2 = z1.union(&random_design(inst, &mut rng, 0.3));
        for t in inst.trips() {
            let g1 = route(inst, t, &z1).unwrap().g;
            let g2 = route(inst, t, &z2).unwrap().g;
            if g2 > g1 {
                trip_bad += 1;
            }
        }
    }
    let mut agg_bad = 0;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..AGGREGATE_PAIRS {
        let inst = &suite[i % suite.len()];
        let all: Vec<u64> = inst.trips().iter().map(|t| t.id).collect();
        let t2: TripSet = all.iter().copied().filter(|_| rng.gen_bool(0.8)).collect();
        let t1: TripSet = t2.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let z1 = enumerate_dfd(inst, &t1, &Design::empty()).unwrap().design;
        let z2 = enumerate_dfd(inst, &t2, &Design::empty()).unwrap().design;
        let mut sum = 0.0;
        let mut scale = 1.0f64;
        for id in t2.difference(&t1) {
            let t = inst.trip(*id).unwrap();
            let g1 = route(inst, t, &z1).unwrap().g;
            let g2 = route(inst, t, &z2).unwrap().g;
            sum += t.weight() * (g2 - g1);
            scale = scale.max(t.weight() * g1.abs());
        }
        worst = worst.max(sum);
        if sum > REL_TOL * scale {
            agg_bad += 1;
        }
    }
    verdict(
        trip_bad == 0 && agg_bad == 0,
        format!(
            "{MONOTONE_PAIRS} design pairs with {trip_bad} per-trip violations; {AGGREGATE_PAIRS} trip-set pairs with {agg_bad} aggregate violations (max sum {worst:.3e})"
        ),
    )
}

/// Trips admitted by rule d at a step adopt every later fixed design.
fn rule_d_persistence(inst: &Instance, out: &ArcOutcome, rules: &[ExpansionRule]) -> (usize, usize) {
    let (mut checked, mut bad) = (0, 0);
    for (i, step) in out.steps.iter().enumerate() {
        if rules[step.stage - 1] != ExpansionRule::D {
            continue;
        }
        for later in &out.steps[i..] {
            let e = eval_design(inst, &later.fixed, &later.t_hat).unwrap();
            for id in &step.expanded {
                checked += 1;
                if e.adopts(inst, *id) != Some(true) {
                    bad += 1;
                }
            }
        }
    }
    (checked, bad)
}

fn c06_ub() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let suite = dfd_suite(DFD_INSTANCES);
    let mut bad = 0;
    let mut cases = 0;
    while cases < UB_CASES {
        let inst = &suite[rng.gen_range(0..suite.len())];
        if inst.params().theta <= 0.0 {
            continue;
        }
        let t = &inst.trips()[rng.gen_range(0..inst.trips().len())];
        let z1 = random_design(inst, &mut rng, 0.3);
        let z2 = z1.union(&random_design(inst, &mut rng, 0.4));
        let r1 = route(inst, t, &z1).unwrap();
        let ub = adoption_ub(t, &r1, inst).unwrap();
        let t2 = route(inst, t, &z2).unwrap().f;
        if t2 > ub + BOUND_TOL * ub.abs().max(1.0) {
            bad += 1;
        }
        cases += 1;
    }

    let opts = ArcOptions::default();
    let (mut checked, mut persist_bad) = (0, 0);
    for inst in three_hub_suite(TINY_SUITE) {
        let s1 = arc_s1(&inst, ExpansionRule::D, &Design::empty(), &opts).unwrap();
        let (c, b) = rule_d_persistence(&inst, &s1, &[ExpansionRule::D]);
        checked += c;
        persist_bad += b;
        let s2 = arc_s2(&inst, ExpansionRule::D, ExpansionRule::A, &Design::empty(), &opts).unwrap();
        let (c, b) = rule_d_persistence(&inst, &s2, &[ExpansionRule::D, ExpansionRule::A]);
        checked += c;
        persist_bad += b;
    }
    verdict(
        bad == 0 && persist_bad == 0,
        format!(
            "{UB_CASES} (trip, z1 <= z2) cases with {bad} bound violations; {checked} rule-d adoption checks along traces with {persist_bad} violations"
        ),
    )
}

fn c07_structure() -> Verdict {
    let params = RunParams::default();
    let opts = ArcOptions::default();
    let mut grad_bad = 0;
    let (mut s1a_bad, mut s1a_vacuous, mut vacuous_rejects) = (0, 0, 0);
    let mut s1d_bad = 0;
    let mut seq_bad = 0;
    for inst in three_hub_suite(TINY_SUITE) {
        let grad = run_algorithm(&inst, Algorithm::Grad, &params).unwrap();
        if grad.evaluation.r_false != 0.0 {
            grad_bad += 1;
        }
        let s1a = arc_s1(&inst, ExpansionRule::A, &Design::empty(), &opts).unwrap();
        if s1a.steps.is_empty() {
            // no cycle in the core design: no expansion ever ran
            s1a_vacuous += 1;
            if s1a.outcome.evaluation.r_false != 0.0 {
                vacuous_rejects += 1;
            }
        } else if s1a.outcome.evaluation.r_false != 0.0 {
            s1a_bad += 1;
        }
        let s1d = arc_s1(&inst, ExpansionRule::D, &Design::empty(), &opts).unwrap();
        if s1d.outcome.trace.records.iter().any(|r| r.a_false != 0.0) {
            s1d_bad += 1;
        }
        let s2 = arc_s2(&inst, ExpansionRule::C, ExpansionRule::A, &Design::empty(), &opts).unwrap();
        for out in [&s1a, &s1d, &s2] {
            for w in out.steps.windows(2) {
                if w[1].objective >= w[0].objective || !w[0].fixed.is_subset(&w[1].fixed) {
                    seq_bad += 1;
                }
            }
        }
    }
    verdict(
        grad_bad == 0 && s1a_bad == 0 && s1d_bad == 0 && seq_bad == 0,
        format!(
            "{TINY_SUITE} instances: grad r_false>0 on {grad_bad}; arc-s1(a) r_false>0 on {s1a_bad} of {} with a fixed cycle ({s1a_vacuous} stop before any cycle, {vacuous_rejects} of them with r_false>0); arc-s1(d) a_false>0 on {s1d_bad}; {seq_bad} non-decreasing steps",
            TINY_SUITE - s1a_vacuous
        ),
    )
}

fn c08_exact() -> Verdict {
    let params = RunParams::default();
    let mut dominated = 0;
    let mut optimal_hits = 0;
    let mut gaps: Vec<f64> = Vec::new();
    for inst in three_hub_suite(TINY_SUITE) {
        let exact = run_algorithm(&inst, Algorithm::Exact, &params).unwrap().evaluation.objective;
        let mut best = f64::INFINITY;
        for alg in Algorithm::HEURISTICS {
            let obj = run_algorithm(&inst, alg, &params).unwrap().evaluation.objective;
            if obj < exact - REL_TOL * exact.abs().max(1.0) {
                dominated += 1;
            }
            gaps.push((obj - exact) / exact.abs().max(1e-12) * 100.0);
            best = best.min(obj);
        }
        if close(best, exact, REL_TOL) {
            optimal_hits += 1;
        }
    }
    gaps.sort_by(f64::total_cmp);
    let zero = gaps.iter().filter(|&&g| g.abs() < 1e-7).count();
    let pct = |q: f64| gaps[((gaps.len() - 1) as f64 * q).round() as usize];
    let majority = if optimal_hits * 2 > TINY_SUITE { "majority" } else { "below majority (reported only)" };
    verdict(
        dominated == 0,
        format!(
            "{dominated} heuristic runs below the exact optimum; best of five optimal on {optimal_hits}/{TINY_SUITE} ({majority}); per-run gap %: zero on {zero}/{}, median {:.3}, p90 {:.3}, max {:.3}",
            gaps.len(),
            pct(0.5),
            pct(0.9),
            pct(1.0)
        ),
    )
}

fn complete(out: &HeuristicOutcome) -> bool {
    let fp = out.design.fingerprint();
    !out.trace.records.is_empty()
        && out.trace.records.iter().any(|r| r.fingerprint == fp)
        && out.evaluation.objective.is_finite()
        && out.evaluation.routes.len() == out.evaluation.adopts.len()
}

fn c09_desk() -> Verdict {
    let cfg = GeneratorConfig::default();
    let inst = generate_synthetic(&cfg, 1).unwrap();
    let shape = (inst.stop_count(), inst.hubs().len(), inst.trips().len());
    let p = inst.params();
    let params_ok = shape == (100, 8, 200)
        && p.theta == 0.001
        && p.omega == 1.0
        && p.bus_cost == odmts::BusCost::PerDistance(3.87)
        && p.wait.get(0, 1) == 7.5
        && p.ticket == 2.5;
    let mut pass = params_ok;
    let mut parts = Vec::new();
    for alg in Algorithm::HEURISTICS {
        let started = Instant::now();
        match run_algorithm(&inst, alg, &RunParams::default()) {
            Ok(out) => {
                let secs = started.elapsed();
                let ok = secs < DESK_BUDGET && complete(&out) && !out.trace.to_csv().is_empty();
                pass &= ok;
                parts.push(format!(
                    "{alg} {:.1}s obj {:.2} ({} rows)",
                    secs.as_secs_f64(),
                    out.evaluation.objective,
                    out.trace.records.len()
                ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{alg} failed: {e}"));
            }
        }
    }
    verdict(pass, format!("{}x{}x{} instance; {}", shape.0, shape.1, shape.2, parts.join("; ")))
}

fn fingerprint_run(out: &HeuristicOutcome) -> String {
    let e = &out.evaluation;
    format!(
        "{}|{}|{:?}|{}|{}|{:?}|{}",
        out.design.fingerprint(),
        e.objective.to_bits(),
        e.adopters,
        e.r_false.to_bits(),
        e.a_false.to_bits(),
        e.kpis,
        out.trace.csv_body()
    )
}

fn c10_determinism() -> Verdict {
    let tiny = three_hub_suite(3);
    let mid_cfg = GeneratorConfig {
        stops: 40,
        hubs: 5,
        core_trips: 20,
        latent_classes: vec![
            odmts::LatentClass { trips: 30, alpha: 2.0 },
            odmts::LatentClass { trips: 10, alpha: 1.5 },
        ],
        buses_per_leg: 1.0,
        ..GeneratorConfig::default()
    };
    let mid = generate_synthetic(&mid_cfg, 3).unwrap();
    let mut runs = 0;
    let mut differ = BTreeSet::new();
    let mut cases: Vec<(&Instance, Algorithm)> = Vec::new();
    for inst in &tiny {
        for alg in Algorithm::ALL {
            cases.push((inst, alg));
        }
    }
    for alg in Algorithm::ALL.into_iter().filter(|a| *a != Algorithm::Exact) {
        cases.push((&mid, alg));
    }
    for (inst, alg) in cases {
        let mut seen: Option<String> = None;
        for threads in [1, 2, 4] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let out = pool.install(|| run_algorithm(inst, alg, &RunParams::default())).unwrap();
            let fp = fingerprint_run(&out);
            runs += 1;
            match &seen {
                None => seen = Some(fp),
                Some(s) if *s != fp => {
                    differ.insert(alg.to_string());
                }
                Some(_) => {}
            }
        }
    }
    verdict(
        differ.is_empty(),
        format!("{runs} runs over 1, 2 and 4 threads; differing algorithms: {:?}", differ),
    )
}
