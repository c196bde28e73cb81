//! Small hand-checkable instances used by tests and examples.

use crate::instance::{BusCost, CandidateArcs, CostParams, Instance, Matrix, Trip};

/// Four stops `0..4`, hubs `1` and `2`, `theta = 0.5`, `omega = 1`, a
/// five-minute wait on both hub arcs and a `$2.5` fare.
///
/// Shuttle legs between the two hubs are disallowed. `beta` is the weighted
/// investment cost of each of the two hub arcs. Trip `0` is a single-rider
/// core trip `0 -> 3`; `extra` trips are appended after it.
pub fn four_stop(beta: f64, extra: Vec<Trip>) -> Instance {
    let d = [
        [0.0, 2.0, 12.0, 12.0],
        [2.0, 0.0, 8.0, 10.0],
        [12.0, 8.0, 0.0, 1.5],
        [12.0, 10.0, 1.5, 0.0],
    ];
    let t = [
        [0.0, 5.0, 20.0, 25.0],
        [5.0, 0.0, 10.0, 20.0],
        [20.0, 10.0, 0.0, 4.0],
        [25.0, 20.0, 4.0, 0.0],
    ];
    let rows = |m: [[f64; 4]; 4]| m.iter().map(|r| r.to_vec()).collect::<Vec<_>>();
    let params = CostParams {
        theta: 0.5,
        omega: 1.0,
        // (1 - 0.5) * rate * 1 bus * 8 km
        bus_cost: BusCost::PerDistance(beta / 4.0),
        buses_per_leg: 1.0,
        wait: Matrix::filled(2, 5.0),
        ticket: 2.5,
        shuttle_between_hubs: false,
        candidate_arcs: CandidateArcs::All,
        fixed_arcs: vec![],
        fixed_arc_costed: true,
    };
    let mut trips = vec![Trip::core(0, 0, 3, 1)];
    trips.extend(extra);
    Instance::new(
        vec![0, 1, 2, 3],
        vec![1, 2],
        Matrix::from_rows(&rows(t)).expect("square"),
        Matrix::from_rows(&rows(d)).expect("square"),
        trips,
        params,
    )
    .expect("valid fixture")
}
