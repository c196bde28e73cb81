//! Design of On-Demand Multimodal Transit Systems (ODMTS) with latent-demand
//! adoption.
//!
//! The crate solves the fixed-demand design problem exactly with Benders
//! decomposition, evaluates designs under a time-threshold mode-choice model,
//! and approximates the bilevel design-with-adoption optimum with five
//! iterative heuristics: three trip-based (`rho_grad`, `eta_grre`,
//! `rho_gagr`) and two arc-based (`arc_s1`, `arc_s2`). Exhaustive oracles
//! for tiny instances live next to the algorithms they certify.

pub mod adoption;
pub mod arc_heuristics;
pub mod cycles;
pub mod design;
pub mod dfd;
pub mod error;
pub mod fixtures;
pub mod harness;
pub mod instance;
pub mod master;
pub mod router;
pub mod synthetic;
pub mod trace;
pub mod trip_heuristics;

pub use adoption::{choice, eval_design, exact_tiny, net_cost, DesignEvaluation, ExactSolution, Kpis};
pub use arc_heuristics::{adoption_ub, arc_s1, arc_s2, expand, ArcOptions, ArcOutcome, ExpansionRule};
pub use cycles::{find_cycles, Cycle};
pub use design::{enumerate_designs, Design};
pub use dfd::{enumerate_dfd, make_cut, solve_dfd, BendersCut, DfdOptions, DfdSolution, DfdSolver};
pub use error::{Error, Result};
pub use instance::{
    derive_weights, load_instance, ArcId, BusCost, CandidateArcs, CostParams, Instance, Matrix, StopIdx,
    Trip, TripId, TripKind, TripSet, WeightTable,
};
pub use master::solve_master;
pub use router::{is_direct_trip, route, route_batch, Leg, Mode, Network, Route};
pub use synthetic::{generate_synthetic, GeneratorConfig, LatentClass};
pub use trace::{HeuristicOutcome, HeuristicTrace, TraceRecord};
pub use trip_heuristics::{eta_grre, rho_gagr, rho_grad, TripOptions};

/// Written into every output file.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Relative comparison tolerance for objective values, with an absolute
/// fallback near zero.
pub const OBJ_TOL: f64 = 1e-9;

#[inline]
pub(crate) fn tol(x: f64) -> f64 {
    OBJ_TOL * x.abs().max(1.0)
}
