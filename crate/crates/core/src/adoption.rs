//! Rider choice model and design evaluation over the full trip set.

use rayon::prelude::*;
use serde::Serialize;

use crate::design::{enumerate_designs, Design};
use crate::dfd::{solve_dfd, DfdSolution};
use crate::error::{Error, Result};
use crate::instance::{Instance, Trip, TripId, TripSet};
use crate::router::{Network, Route};
use crate::tol;

/// Adoption decision of a latent rider: adopt when the transit travel time
/// is at most `alpha * t_cur`.
pub fn choice(route: &Route, trip: &Trip) -> Result<bool> {
    let threshold = trip.time_threshold().ok_or(Error::CoreTripChoice { trip: trip.id })?;
    Ok(route.f <= threshold)
}

/// Shuttle cost of a route minus the fare, in dollars.
pub fn net_cost(route: &Route, inst: &Instance) -> f64 {
    route.money - inst.params().ticket
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Kpis {
    /// Shuttle kilometres of served riders, weighted by rider count.
    pub shuttle_km: f64,
    /// Weighted investment `sum beta z`.
    pub bus_investment: f64,
    pub bus_investment_dollars: f64,
    /// Sum of `p * f` over served trips.
    pub total_convenience_minutes: f64,
    /// Bus dollars plus shuttle dollars minus fares of served riders.
    pub agency_net_cost: f64,
    pub served_riders: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DesignEvaluation {
    pub objective: f64,
    pub adopters: Vec<TripId>,
    pub r_false: f64,
    pub a_false: f64,
    pub kpis: Kpis,
    /// One route per instance trip, in instance order.
    #[serde(skip)]
    pub routes: Vec<Route>,
    /// Adoption flag per instance trip; `None` for core trips.
    #[serde(skip)]
    pub adopts: Vec<Option<bool>>,
}

/// Flat form used by the comparison CSV.
#[derive(Clone, Debug, Serialize)]
pub struct EvaluationRow {
    pub objective: f64,
    pub adopters: usize,
    pub r_false: f64,
    pub a_false: f64,
    pub shuttle_km: f64,
    pub bus_investment: f64,
    pub bus_investment_dollars: f64,
    pub total_convenience_minutes: f64,
    pub agency_net_cost: f64,
}

/// Evaluation file written next to a design.
#[derive(Clone, Debug, Serialize)]
pub struct EvaluationReport<'a> {
    pub tool_version: &'static str,
    pub fingerprint: String,
    pub open_arcs: usize,
    pub input_trips: usize,
    #[serde(flatten)]
    pub evaluation: &'a DesignEvaluation,
}

impl DesignEvaluation {
    pub fn row(&self) -> EvaluationRow {
        let k = &self.kpis;
        EvaluationRow {
            objective: self.objective,
            adopters: self.adopters.len(),
            r_false: self.r_false,
            a_false: self.a_false,
            shuttle_km: k.shuttle_km,
            bus_investment: k.bus_investment,
            bus_investment_dollars: k.bus_investment_dollars,
            total_convenience_minutes: k.total_convenience_minutes,
            agency_net_cost: k.agency_net_cost,
        }
    }

    pub fn report<'a>(&'a self, design: &Design, t_hat: &TripSet) -> EvaluationReport<'a> {
        EvaluationReport {
            tool_version: crate::TOOL_VERSION,
            fingerprint: design.fingerprint(),
            open_arcs: design.len(),
            input_trips: t_hat.len(),
            evaluation: self,
        }
    }

    pub fn adopts(&self, inst: &Instance, trip: TripId) -> Option<bool> {
        self.adopts[inst.trip_position(trip)?]
    }
}

/// Routes every trip of the instance under `design` and scores it with the
/// leader objective. `t_hat` is the trip set the design was built for and
/// only affects the false rejection and adoption rates.
pub fn eval_design(inst: &Instance, design: &Design, t_hat: &TripSet) -> Result<DesignEvaluation> {
    design.validate(inst)?;
    if let Some(&id) = t_hat.iter().find(|&&id| inst.trip(id).is_none()) {
        return Err(Error::UnknownTrip(id));
    }
    let net = Network::new(inst, design);
    let routes: Vec<Route> = inst.trips().par_iter().map(|t| net.route(t)).collect::<Result<_>>()?;
    evaluate_routes(inst, design, t_hat, routes)
}

fn evaluate_routes(inst: &Instance, design: &Design, t_hat: &TripSet, routes: Vec<Route>) -> Result<DesignEvaluation> {
    let w = inst.weights();
    let ticket = inst.params().ticket;
    let mut kpis = Kpis {
        bus_investment: design.arcs().iter().fold(0.0, |s, &a| s + w.beta[a]),
        bus_investment_dollars: design.arcs().iter().fold(0.0, |s, &a| s + w.beta_dollars[a]),
        ..Kpis::default()
    };
    kpis.agency_net_cost = kpis.bus_investment_dollars;
    let mut objective = kpis.bus_investment;
    let mut adopters = Vec::new();
    let mut adopts = Vec::with_capacity(routes.len());
    let (mut latent, mut false_rej, mut false_adopt) = (0usize, 0usize, 0usize);
    for (trip, route) in inst.trips().iter().zip(&routes) {
        let p = trip.weight();
        let served = if trip.is_latent() {
            latent += 1;
            let d = choice(route, trip)?;
            let considered = t_hat.contains(&trip.id);
            if d && !considered {
                false_rej += 1;
            }
            if !d && considered {
                false_adopt += 1;
            }
            if d {
                objective += p * (route.g - w.varphi);
                adopters.push(trip.id);
            }
            adopts.push(Some(d));
            d
        } else {
            objective += p * route.g;
            adopts.push(None);
            true
        };
        if served {
            kpis.shuttle_km += p * route.shuttle_km;
            kpis.total_convenience_minutes += p * route.f;
            kpis.agency_net_cost += p * (route.money - ticket);
            kpis.served_riders += u64::from(trip.riders);
        }
    }
    let pct = |n: usize| if latent == 0 { 0.0 } else { n as f64 / latent as f64 * 100.0 };
    Ok(DesignEvaluation {
        objective,
        adopters,
        r_false: pct(false_rej),
        a_false: pct(false_adopt),
        kpis,
        routes,
        adopts,
    })
}

/// Core trips plus the latent trips adopting `evaluation`.
pub fn adopting_set(inst: &Instance, evaluation: &DesignEvaluation) -> TripSet {
    let mut set = inst.core_trips();
    set.extend(evaluation.adopters.iter().copied());
    set
}

#[derive(Clone, Debug)]
pub struct ExactSolution {
    pub design: Design,
    pub evaluation: DesignEvaluation,
    /// Core trips plus the adopters of the optimal design.
    pub t_hat_star: TripSet,
    /// Fixed-demand optimum for `t_hat_star`.
    pub resolve: DfdSolution,
    pub resolve_evaluation: DesignEvaluation,
    /// Whether the re-solve returns the optimal design itself.
    pub reproduces: bool,
    pub designs_checked: usize,
}

/// Exhaustive leader optimum over every weakly-connected design containing
/// `fixed`. Ties go to the shortlex-smallest design.
pub fn exact_tiny(inst: &Instance, fixed: &Design) -> Result<ExactSolution> {
    let fixed = fixed.union(&Design::fixed(inst));
    let designs = enumerate_designs(inst, &fixed)?;
    let everyone = inst.all_trips();
    let mut best: Option<(Design, DesignEvaluation)> = None;
    for z in &designs {
        let e = eval_design(inst, z, &everyone)?;
        let better = match &best {
            None => true,
            Some((d, b)) => {
                e.objective < b.objective - tol(b.objective)
                    || (e.objective <= b.objective + tol(b.objective) && z < d)
            }
        };
        if better {
            best = Some((z.clone(), e));
        }
    }
    let (design, _) = best.ok_or_else(|| Error::InvalidDesign("no feasible design contains the fixed arcs".into()))?;
    let probe = eval_design(inst, &design, &everyone)?;
    let t_hat_star = adopting_set(inst, &probe);
    let evaluation = eval_design(inst, &design, &t_hat_star)?;
    let resolve = solve_dfd(inst, &t_hat_star, &fixed)?;
    let resolve_evaluation = eval_design(inst, &resolve.design, &t_hat_star)?;
    let reproduces = resolve.design == design;
    Ok(ExactSolution {
        design,
        evaluation,
        t_hat_star,
        resolve,
        resolve_evaluation,
        reproduces,
        designs_checked: designs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::four_stop;
    use crate::router::route;

    fn route_with_f(f: f64) -> Route {
        Route { legs: vec![], g: 0.0, f, money: 0.0, shuttle_km: 0.0 }
    }

    #[test]
    fn choice_is_non_strict() {
        let t = |alpha, t_cur| Trip::latent(1, 0, 3, 1, alpha, t_cur);
        assert!(choice(&route_with_f(30.0), &t(2.0, 20.0)).unwrap());
        assert!(!choice(&route_with_f(30.0), &t(1.5, 19.0)).unwrap());
        assert!(choice(&route_with_f(30.0), &t(1.5, 20.0)).unwrap());
    }

    #[test]
    fn choice_rejects_core_trip() {
        let err = choice(&route_with_f(1.0), &Trip::core(4, 0, 3, 1)).unwrap_err();
        assert!(matches!(err, Error::CoreTripChoice { trip: 4 }));
    }

    #[test]
    fn net_cost_of_routes() {
        let inst = four_stop(2.0, vec![]);
        let z = Design::from_arcs([inst.arc_id(1, 2).unwrap()]);
        let r = route(&inst, &inst.trips()[0], &z).unwrap();
        assert!((net_cost(&r, &inst) - 1.0).abs() < 1e-12);
        let direct = route(&inst, &inst.trips()[0], &Design::empty()).unwrap();
        assert!((net_cost(&direct, &inst) - 9.5).abs() < 1e-12);
    }

    #[test]
    fn objective_with_core_and_latent_adopter() {
        // core trip with two riders plus a single-rider latent trip
        let inst = four_stop(2.0, vec![Trip::latent(1, 0, 3, 1, 2.0, 20.0)]);
        let mut trips = inst.trips().to_vec();
        trips[0].riders = 2;
        let inst = crate::instance::Instance::new(
            inst.stop_ids().to_vec(),
            inst.hubs().to_vec(),
            inst.time().clone(),
            inst.dist().clone(),
            trips,
            inst.params().clone(),
        )
        .unwrap();
        let z = Design::full(&inst);
        let e = eval_design(&inst, &z, &inst.all_trips()).unwrap();
        assert!((e.objective - 44.0).abs() < 1e-9, "{}", e.objective);
        assert_eq!(e.adopters, vec![1]);
        assert_eq!((e.r_false, e.a_false), (0.0, 0.0));
    }

    #[test]
    fn empty_design_without_adopters() {
        let inst = four_stop(2.0, vec![Trip::latent(1, 0, 3, 1, 1.0, 20.0)]);
        let e = eval_design(&inst, &Design::empty(), &inst.core_trips()).unwrap();
        assert!(e.adopters.is_empty());
        let direct = inst.weights().gamma.get(0, 3);
        assert!((e.objective - direct).abs() < 1e-12);
        assert_eq!(e.adopts, vec![None, Some(false)]);
    }

    #[test]
    fn unknown_t_hat_trip() {
        let inst = four_stop(2.0, vec![]);
        let t_hat: TripSet = [0, 9].into_iter().collect();
        assert!(matches!(eval_design(&inst, &Design::empty(), &t_hat), Err(Error::UnknownTrip(9))));
    }

    #[test]
    fn exact_without_latent_matches_dfd_oracle() {
        for beta in [0.5, 2.0, 6.0] {
            let inst = four_stop(beta, vec![]);
            let exact = exact_tiny(&inst, &Design::empty()).unwrap();
            let dfd = crate::dfd::enumerate_dfd(&inst, &inst.core_trips(), &Design::empty()).unwrap();
            assert_eq!(exact.design, dfd.design);
            assert!((exact.evaluation.objective - dfd.objective).abs() < 1e-9);
        }
    }
}
