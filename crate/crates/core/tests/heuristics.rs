mod common;

use std::time::Duration;

use common::{close, three_hub_suite};
use odmts::harness::{run_algorithm, Algorithm, RunParams};
use odmts::{arc_s1, arc_s2, eval_design, exact_tiny, ArcOptions, Design, ExpansionRule};

#[test]
fn exact_dominates_every_heuristic() {
    let params = RunParams::default();
    for inst in three_hub_suite(15) {
        let exact = exact_tiny(&inst, &Design::empty()).unwrap().evaluation.objective;
        for alg in Algorithm::HEURISTICS {
            let out = run_algorithm(&inst, alg, &params).unwrap();
            assert!(out.evaluation.objective >= exact - 1e-9 * exact.abs().max(1.0), "{alg} beat exact");
        }
    }
}

#[test]
fn outcomes_are_self_consistent() {
    let params = RunParams::default();
    for inst in three_hub_suite(10) {
        for alg in Algorithm::ALL {
            let out = run_algorithm(&inst, alg, &params).unwrap();
            out.design.validate(&inst).unwrap();
            let again = eval_design(&inst, &out.design, &out.t_hat).unwrap();
            assert_eq!(again, out.evaluation, "{alg}");
            assert!(inst.core_trips().is_subset(&out.t_hat) || alg == Algorithm::Dfd);
            if let Some(min) = out.trace.min_objective() {
                assert!(min.is_finite());
            }
        }
    }
}

#[test]
fn gagr_returns_its_best_main_record() {
    let params = RunParams::default();
    for inst in three_hub_suite(10) {
        let out = run_algorithm(&inst, Algorithm::Gagr, &params).unwrap();
        let best = out
            .trace
            .records
            .iter()
            .filter(|r| r.phase == "main")
            .map(|r| r.objective)
            .fold(f64::INFINITY, f64::min);
        assert!(close(out.evaluation.objective, best, 1e-12));
    }
}

#[test]
fn fixed_arcs_survive_every_algorithm() {
    for inst in three_hub_suite(8) {
        let arc = inst.arcs()[0];
        let fixed = Design::from_arcs([0, inst.arc_id(arc.to, arc.from).unwrap()]);
        let params = RunParams { fixed: fixed.clone(), ..RunParams::default() };
        for alg in Algorithm::ALL {
            let out = run_algorithm(&inst, alg, &params).unwrap();
            assert!(fixed.is_subset(&out.design), "{alg} dropped a fixed arc");
        }
    }
}

#[test]
fn arc_steps_strictly_improve() {
    let opts = ArcOptions::default();
    for inst in three_hub_suite(15) {
        for rule in [ExpansionRule::A, ExpansionRule::B, ExpansionRule::C, ExpansionRule::D] {
            let out = arc_s1(&inst, rule, &Design::empty(), &opts).unwrap();
            for w in out.steps.windows(2) {
                assert!(w[1].objective < w[0].objective);
                assert!(w[0].fixed.is_subset(&w[1].fixed));
                assert!(w[0].t_hat.is_subset(&w[1].t_hat));
            }
        }
        assert!(arc_s2(&inst, ExpansionRule::A, ExpansionRule::D, &Design::empty(), &opts).is_err());
    }
}

#[test]
fn tiny_time_limit_truncates_trace() {
    let inst = &three_hub_suite(1)[0];
    let zero = RunParams { time_limit: Some(Duration::ZERO), ..RunParams::default() };
    assert!(run_algorithm(inst, Algorithm::Grad, &zero).is_err());
    let params = RunParams { time_limit: Some(Duration::from_nanos(1)), ..RunParams::default() };
    for alg in [Algorithm::Grad, Algorithm::Grre, Algorithm::Gagr] {
        let out = run_algorithm(inst, alg, &params).unwrap();
        assert!(out.trace.truncated, "{alg}");
        assert!(out.trace.to_csv().contains("truncated=true"));
    }
}
