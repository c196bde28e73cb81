//! Deterministic synthetic instances on planar uniform points.
//!
//! Distances are Euclidean and travel times are distance over a constant
//! speed, so both matrices satisfy the triangle inequality. Trips are split
//! into income classes by the region of their destination stop: the first
//! region hosts core trips, each later region one latent class.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{BusCost, CandidateArcs, CostParams, Instance, Matrix, StopIdx, Trip};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatentClass {
    pub trips: usize,
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub stops: usize,
    pub hubs: usize,
    pub core_trips: usize,
    pub latent_classes: Vec<LatentClass>,
    /// Side of the square service area in kilometres.
    pub area_km: f64,
    pub speed_kmh: f64,
    pub max_riders: u32,
    pub theta: f64,
    pub omega: f64,
    pub bus_cost: BusCost,
    pub buses_per_leg: f64,
    pub wait_minutes: f64,
    pub ticket: f64,
    pub shuttle_between_hubs: bool,
    pub candidate_arcs: CandidateArcs,
}

impl Default for GeneratorConfig {
    /// A reduced-scale instance with the Ypsilanti cost regime.
    fn default() -> Self {
        GeneratorConfig {
            stops: 100,
            hubs: 8,
            core_trips: 60,
            latent_classes: vec![
                LatentClass { trips: 110, alpha: 2.0 },
                LatentClass { trips: 30, alpha: 1.5 },
            ],
            area_km: 12.0,
            speed_kmh: 30.0,
            max_riders: 4,
            theta: 0.001,
            omega: 1.0,
            bus_cost: BusCost::PerDistance(3.87),
            // one bus an hour over a four hour horizon
            buses_per_leg: 4.0,
            wait_minutes: 7.5,
            ticket: 2.5,
            shuttle_between_hubs: false,
            candidate_arcs: CandidateArcs::All,
        }
    }
}

impl GeneratorConfig {
    /// A desk-checkable configuration: few stops and hubs, so exhaustive
    /// enumeration over designs stays cheap.
    pub fn tiny(stops: usize, hubs: usize, core: usize, latent: usize) -> Self {
        GeneratorConfig {
            stops,
            hubs,
            core_trips: core,
            latent_classes: vec![
                LatentClass { trips: latent - latent / 2, alpha: 2.0 },
                LatentClass { trips: latent / 2, alpha: 1.5 },
            ],
            area_km: 10.0,
            ..GeneratorConfig::default()
        }
    }

    pub fn latent_trips(&self) -> usize {
        self.latent_classes.iter().map(|c| c.trips).sum()
    }
}

pub fn generate_synthetic(config: &GeneratorConfig, seed: u64) -> Result<Instance> {
    if config.hubs > config.stops {
        return Err(Error::Parameter(format!(
            "hub count {} exceeds stop count {}",
            config.hubs, config.stops
        )));
    }
    if config.stops < 2 {
        return Err(Error::Parameter("at least two stops are needed".into()));
    }
    if !(config.area_km > 0.0 && config.speed_kmh > 0.0) {
        return Err(Error::Parameter("area and speed must be positive".into()));
    }
    if config.max_riders == 0 {
        return Err(Error::Parameter("max_riders must be positive".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = config.stops;
    let points: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen::<f64>() * config.area_km, rng.gen::<f64>() * config.area_km))
        .collect();

    let mut dist = Matrix::zeros(n);
    let mut time = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let d = (points[i].0 - points[j].0).hypot(points[i].1 - points[j].1);
                dist.set(i, j, d);
                time.set(i, j, d / config.speed_kmh * 60.0);
            }
        }
    }

    let hubs = spread_hubs(&points, config.hubs, config.area_km);

    let regions = 1 + config.latent_classes.len();
    let width = config.area_km / regions as f64;
    let mut members: Vec<Vec<StopIdx>> = vec![Vec::new(); regions];
    for (s, p) in points.iter().enumerate() {
        let r = ((p.0 / width) as usize).min(regions - 1);
        members[r].push(s);
    }
    let everyone: Vec<StopIdx> = (0..n).collect();

    let mut trips = Vec::with_capacity(config.core_trips + config.latent_trips());
    let mut next_id = 0u64;
    let draw = |rng: &mut ChaCha8Rng, region: usize| -> (StopIdx, StopIdx, u32) {
        let pool = if members[region].is_empty() { &everyone } else { &members[region] };
        let destination = *pool.choose(rng).expect("non-empty stop pool");
        let origin = loop {
            let o = rng.gen_range(0..n);
            if o != destination {
                break o;
            }
        };
        (origin, destination, rng.gen_range(1..=config.max_riders))
    };
    for _ in 0..config.core_trips {
        let (o, d, p) = draw(&mut rng, 0);
        trips.push(Trip::core(next_id, o, d, p));
        next_id += 1;
    }
    for (c, class) in config.latent_classes.iter().enumerate() {
        for _ in 0..class.trips {
            let (o, d, p) = draw(&mut rng, c + 1);
            trips.push(Trip::latent(next_id, o, d, p, class.alpha, time.get(o, d)));
            next_id += 1;
        }
    }

    let params = CostParams {
        theta: config.theta,
        omega: config.omega,
        bus_cost: config.bus_cost,
        buses_per_leg: config.buses_per_leg,
        wait: Matrix::filled(hubs.len(), config.wait_minutes),
        ticket: config.ticket,
        shuttle_between_hubs: config.shuttle_between_hubs,
        candidate_arcs: config.candidate_arcs,
        fixed_arcs: vec![],
        fixed_arc_costed: true,
    };
    Instance::new((0..n as u64).collect(), hubs, time, dist, trips, params)
}

/// Farthest-point selection starting from the stop nearest the centre.
fn spread_hubs(points: &[(f64, f64)], count: usize, side: f64) -> Vec<StopIdx> {
    if count == 0 {
        return vec![];
    }
    let d = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).hypot(a.1 - b.1);
    let centre = (side / 2.0, side / 2.0);
    let first = (0..points.len())
        .min_by(|&a, &b| d(points[a], centre).total_cmp(&d(points[b], centre)).then(a.cmp(&b)))
        .expect("at least one stop");
    let mut chosen = vec![first];
    let mut gap: Vec<f64> = points.iter().map(|&p| d(p, points[first])).collect();
    while chosen.len() < count {
        let next = (0..points.len())
            .filter(|s| !chosen.contains(s))
            .max_by(|&a, &b| gap[a].total_cmp(&gap[b]).then(b.cmp(&a)))
            .expect("enough stops");
        chosen.push(next);
        for (s, g) in gap.iter_mut().enumerate() {
            *g = g.min(d(points[s], points[next]));
        }
    }
    chosen.sort_unstable();
    chosen
}
