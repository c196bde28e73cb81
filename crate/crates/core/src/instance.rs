//! Problem data: stops, hubs, travel matrices, trips and cost parameters.
//!
//! An [`Instance`] is validated on construction and immutable afterwards.
//! Stops are addressed internally by their position in the stop list
//! ([`StopIdx`]); external stop ids only appear at the file boundary.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Position of a stop in [`Instance::stop_ids`].
pub type StopIdx = usize;
/// Index into [`Instance::arcs`].
pub type ArcId = usize;
pub type TripId = u64;
pub type TripSet = BTreeSet<TripId>;

pub const SCHEMA_VERSION: u32 = 1;

/// Dense square matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn filled(n: usize, value: f64) -> Self {
        Matrix { n, data: vec![value; n * n] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Validation(format!(
                    "matrix row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { n, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TripKind {
    Core,
    Latent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trip {
    pub id: TripId,
    pub origin: StopIdx,
    pub destination: StopIdx,
    pub riders: u32,
    pub kind: TripKind,
    /// Tolerance ratio on the car travel time; latent trips only.
    pub alpha: Option<f64>,
    /// Direct car travel time in minutes; latent trips only.
    pub t_cur: Option<f64>,
}

impl Trip {
    pub fn core(id: TripId, origin: StopIdx, destination: StopIdx, riders: u32) -> Self {
        Trip { id, origin, destination, riders, kind: TripKind::Core, alpha: None, t_cur: None }
    }

    pub fn latent(
        id: TripId,
        origin: StopIdx,
        destination: StopIdx,
        riders: u32,
        alpha: f64,
        t_cur: f64,
    ) -> Self {
        Trip {
            id,
            origin,
            destination,
            riders,
            kind: TripKind::Latent,
            alpha: Some(alpha),
            t_cur: Some(t_cur),
        }
    }

    #[inline]
    pub fn is_latent(&self) -> bool {
        self.kind == TripKind::Latent
    }

    /// Largest transit travel time the rider accepts, `alpha * t_cur`.
    pub fn time_threshold(&self) -> Option<f64> {
        Some(self.alpha? * self.t_cur?)
    }

    #[inline]
    pub fn weight(&self) -> f64 {
        f64::from(self.riders)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BusCost {
    /// Dollars per kilometre driven.
    PerDistance(f64),
    /// Dollars per hour driven.
    PerTime(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[derive(Default)]
pub enum CandidateArcs {
    #[default]
    All,
    /// Each hub connects to its `k` closest hubs by travel time.
    Nearest(usize),
}


#[derive(Clone, Debug, PartialEq)]
pub struct CostParams {
    pub theta: f64,
    pub omega: f64,
    pub bus_cost: BusCost,
    pub buses_per_leg: f64,
    /// Waiting time in minutes, indexed by hub position.
    pub wait: Matrix,
    pub ticket: f64,
    pub shuttle_between_hubs: bool,
    pub candidate_arcs: CandidateArcs,
    /// Hub pairs forced open, as stop indices.
    pub fixed_arcs: Vec<(StopIdx, StopIdx)>,
    pub fixed_arc_costed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HubArc {
    pub from: StopIdx,
    pub to: StopIdx,
}

impl fmt::Display for HubArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

/// Objective weights derived from the cost parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightTable {
    /// Weighted investment cost per candidate arc.
    pub beta: Vec<f64>,
    /// Same investment in unweighted dollars.
    pub beta_dollars: Vec<f64>,
    /// Weighted bus inconvenience per candidate arc.
    pub tau: Vec<f64>,
    /// In-vehicle plus waiting minutes per candidate arc.
    pub bus_minutes: Vec<f64>,
    /// Weighted shuttle cost over all stop pairs.
    pub gamma: Matrix,
    /// Weighted fare revenue per adopting rider.
    pub varphi: f64,
}

#[derive(Clone, Debug)]
pub struct Instance {
    stop_ids: Vec<u64>,
    hubs: Vec<StopIdx>,
    hub_pos: Vec<Option<usize>>,
    time: Matrix,
    dist: Matrix,
    trips: Vec<Trip>,
    trip_pos: HashMap<TripId, usize>,
    params: CostParams,
    arcs: Vec<HubArc>,
    arc_index: HashMap<(StopIdx, StopIdx), ArcId>,
    fixed: Vec<ArcId>,
    weights: WeightTable,
}

impl Instance {
    /// Validates the raw data and materializes the candidate arc set.
    pub fn new(
        stop_ids: Vec<u64>,
        hubs: Vec<StopIdx>,
        time: Matrix,
        dist: Matrix,
        trips: Vec<Trip>,
        params: CostParams,
    ) -> Result<Self> {
        let n = stop_ids.len();
        if n == 0 {
            return Err(Error::Validation("instance has no stops".into()));
        }
        let mut seen = BTreeSet::new();
        for id in &stop_ids {
            if !seen.insert(*id) {
                return Err(Error::Validation(format!("duplicate stop id {id}")));
            }
        }
        let mut hub_pos = vec![None; n];
        for (pos, &h) in hubs.iter().enumerate() {
            if h >= n {
                return Err(Error::Validation(format!("hub {h} is not a stop")));
            }
            if hub_pos[h].is_some() {
                return Err(Error::Validation(format!("duplicate hub {}", stop_ids[h])));
            }
            hub_pos[h] = Some(pos);
        }
        for (name, m) in [("time", &time), ("dist", &dist)] {
            if m.dim() != n {
                return Err(Error::Validation(format!(
                    "{name} matrix is {0}x{0}, expected {n}x{n}",
                    m.dim()
                )));
            }
            for i in 0..n {
                for j in 0..n {
                    let v = m.get(i, j);
                    if !v.is_finite() || v < 0.0 {
                        return Err(Error::Validation(format!(
                            "{name}[{i}][{j}] = {v} must be finite and non-negative"
                        )));
                    }
                }
                if m.get(i, i) != 0.0 {
                    return Err(Error::Validation(format!("{name} diagonal entry {i} is not zero")));
                }
            }
        }

        let mut trip_pos = HashMap::with_capacity(trips.len());
        for (pos, t) in trips.iter().enumerate() {
            if trip_pos.insert(t.id, pos).is_some() {
                return Err(Error::Validation(format!("duplicate trip id {}", t.id)));
            }
            if t.origin >= n || t.destination >= n {
                return Err(Error::Validation(format!("trip {} references an unknown stop", t.id)));
            }
            if t.origin == t.destination {
                return Err(Error::Validation(format!("trip {} has origin equal to destination", t.id)));
            }
            if t.riders == 0 {
                return Err(Error::Validation(format!("trip {} has no riders", t.id)));
            }
            match t.kind {
                TripKind::Core => {
                    if t.alpha.is_some() || t.t_cur.is_some() {
                        return Err(Error::Validation(format!(
                            "core trip {} must not carry alpha or t_cur",
                            t.id
                        )));
                    }
                }
                TripKind::Latent => {
                    match t.alpha {
                        Some(a) if a.is_finite() && a >= 1.0 => {}
                        _ => {
                            return Err(Error::Validation(format!(
                                "latent trip {} needs alpha >= 1",
                                t.id
                            )))
                        }
                    }
                    match t.t_cur {
                        Some(c) if c.is_finite() && c > 0.0 => {}
                        _ => {
                            return Err(Error::Validation(format!(
                                "latent trip {} needs t_cur > 0",
                                t.id
                            )))
                        }
                    }
                }
            }
        }

        let p = &params;
        if !(0.0..=1.0).contains(&p.theta) {
            return Err(Error::Validation(format!("theta out of range: {}", p.theta)));
        }
        let bus_rate = match p.bus_cost {
            BusCost::PerDistance(v) | BusCost::PerTime(v) => v,
        };
        for (name, v) in [
            ("omega", p.omega),
            ("ticket", p.ticket),
            ("buses_per_leg", p.buses_per_leg),
            ("bus cost", bus_rate),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Validation(format!("{name} must be non-negative, got {v}")));
            }
        }
        if p.wait.dim() != hubs.len() {
            return Err(Error::Validation(format!(
                "wait matrix is {0}x{0}, expected {1}x{1}",
                p.wait.dim(),
                hubs.len()
            )));
        }
        for i in 0..hubs.len() {
            for j in 0..hubs.len() {
                let w = p.wait.get(i, j);
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::Validation(format!("wait[{i}][{j}] = {w} must be non-negative")));
                }
            }
        }

        let arcs = candidate_arcs(&hubs, &time, p.candidate_arcs);
        let arc_index: HashMap<_, _> =
            arcs.iter().enumerate().map(|(id, a)| ((a.from, a.to), id)).collect();

        let mut fixed = Vec::with_capacity(p.fixed_arcs.len());
        for &(h, l) in &p.fixed_arcs {
            let Some(&id) = arc_index.get(&(h, l)) else {
                let name = |s: usize| stop_ids.get(s).map_or(s as u64, |x| *x);
                return Err(Error::Validation(format!(
                    "fixed arc ({}, {}) is not a candidate arc",
                    name(h),
                    name(l)
                )));
            };
            fixed.push(id);
        }
        fixed.sort_unstable();
        fixed.dedup();
        if !balanced(&arcs, &fixed, n) {
            return Err(Error::Validation("fixed arcs violate weak connectivity".into()));
        }

        let mut inst = Instance {
            stop_ids,
            hubs,
            hub_pos,
            time,
            dist,
            trips,
            trip_pos,
            params,
            arcs,
            arc_index,
            fixed,
            weights: WeightTable {
                beta: vec![],
                beta_dollars: vec![],
                tau: vec![],
                bus_minutes: vec![],
                gamma: Matrix::zeros(0),
                varphi: 0.0,
            },
        };
        inst.weights = derive_weights(&inst);
        Ok(inst)
    }

    pub fn stop_ids(&self) -> &[u64] {
        &self.stop_ids
    }

    pub fn stop_count(&self) -> usize {
        self.stop_ids.len()
    }

    pub fn hubs(&self) -> &[StopIdx] {
        &self.hubs
    }

    #[inline]
    pub fn is_hub(&self, s: StopIdx) -> bool {
        self.hub_pos[s].is_some()
    }

    #[inline]
    pub fn hub_position(&self, s: StopIdx) -> Option<usize> {
        self.hub_pos[s]
    }

    pub fn time(&self) -> &Matrix {
        &self.time
    }

    pub fn dist(&self) -> &Matrix {
        &self.dist
    }

    pub fn trips(&self) -> &[Trip] {
        &self.trips
    }

    pub fn trip(&self, id: TripId) -> Option<&Trip> {
        self.trip_pos.get(&id).map(|&p| &self.trips[p])
    }

    /// Position of the trip in [`Instance::trips`].
    pub fn trip_position(&self, id: TripId) -> Option<usize> {
        self.trip_pos.get(&id).copied()
    }

    pub fn params(&self) -> &CostParams {
        &self.params
    }

    /// Candidate hub arcs, sorted by `(from, to)`.
    pub fn arcs(&self) -> &[HubArc] {
        &self.arcs
    }

    pub fn arc_id(&self, from: StopIdx, to: StopIdx) -> Option<ArcId> {
        self.arc_index.get(&(from, to)).copied()
    }

    /// Arcs forced open by the instance itself.
    pub fn fixed_arcs(&self) -> &[ArcId] {
        &self.fixed
    }

    pub fn weights(&self) -> &WeightTable {
        &self.weights
    }

    pub fn core_trips(&self) -> TripSet {
        self.trips.iter().filter(|t| !t.is_latent()).map(|t| t.id).collect()
    }

    pub fn latent_trips(&self) -> TripSet {
        self.trips.iter().filter(|t| t.is_latent()).map(|t| t.id).collect()
    }

    pub fn all_trips(&self) -> TripSet {
        self.trips.iter().map(|t| t.id).collect()
    }

    pub fn stop_index(&self, id: u64) -> Option<StopIdx> {
        self.stop_ids.iter().position(|&s| s == id)
    }

    /// Closest hub-pair detour `min_{h,l} d(o,h) + d(l,d)`.
    pub fn min_hub_access(&self, origin: StopIdx, destination: StopIdx) -> f64 {
        let first = self.hubs.iter().map(|&h| self.dist.get(origin, h)).fold(f64::INFINITY, f64::min);
        let last = self
            .hubs
            .iter()
            .map(|&l| self.dist.get(l, destination))
            .fold(f64::INFINITY, f64::min);
        first + last
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_instance()
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&InstanceFile::from_instance(self))
            .expect("instance serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json_string())
            .map_err(|source| Error::Io { path: path.display().to_string(), source })
    }
}

/// Reads and validates an instance file.
pub fn load_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    Instance::from_json_str(&text)
}

/// Computes beta, tau, gamma and varphi from the cost parameters.
///
/// Fixed arcs get a zero investment cost when `fixed_arc_costed` is off.
pub fn derive_weights(inst: &Instance) -> WeightTable {
    let p = &inst.params;
    let theta = p.theta;
    let n = inst.stop_count();
    let mut beta = Vec::with_capacity(inst.arcs.len());
    let mut beta_dollars = Vec::with_capacity(inst.arcs.len());
    let mut tau = Vec::with_capacity(inst.arcs.len());
    let mut bus_minutes = Vec::with_capacity(inst.arcs.len());
    for (id, a) in inst.arcs.iter().enumerate() {
        let dollars = match p.bus_cost {
            BusCost::PerDistance(rate) => rate * p.buses_per_leg * inst.dist.get(a.from, a.to),
            BusCost::PerTime(rate) => rate * p.buses_per_leg * inst.time.get(a.from, a.to) / 60.0,
        };
        let uncosted = !p.fixed_arc_costed && inst.fixed.binary_search(&id).is_ok();
        let dollars = if uncosted { 0.0 } else { dollars };
        beta_dollars.push(dollars);
        beta.push((1.0 - theta) * dollars);
        let hp = inst.hub_pos[a.from].expect("arc tail is a hub");
        let hq = inst.hub_pos[a.to].expect("arc head is a hub");
        let minutes = inst.time.get(a.from, a.to) + p.wait.get(hp, hq);
        bus_minutes.push(minutes);
        tau.push(theta * minutes);
    }
    let mut gamma = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            gamma.set(
                i,
                j,
                (1.0 - theta) * p.omega * inst.dist.get(i, j) + theta * inst.time.get(i, j),
            );
        }
    }
    WeightTable { beta, beta_dollars, tau, bus_minutes, gamma, varphi: (1.0 - theta) * p.ticket }
}

fn candidate_arcs(hubs: &[StopIdx], time: &Matrix, rule: CandidateArcs) -> Vec<HubArc> {
    let mut arcs = Vec::new();
    for &h in hubs {
        let mut others: Vec<StopIdx> = hubs.iter().copied().filter(|&l| l != h).collect();
        if let CandidateArcs::Nearest(k) = rule {
            others.sort_by(|&a, &b| time.get(h, a).total_cmp(&time.get(h, b)).then(a.cmp(&b)));
            others.truncate(k);
        }
        arcs.extend(others.into_iter().map(|l| HubArc { from: h, to: l }));
    }
    arcs.sort_unstable();
    arcs
}

/// Equal in- and out-degree at every hub.
pub(crate) fn balanced(arcs: &[HubArc], open: &[ArcId], n: usize) -> bool {
    let mut degree = vec![0i64; n];
    for &a in open {
        degree[arcs[a].from] += 1;
        degree[arcs[a].to] -= 1;
    }
    degree.iter().all(|&d| d == 0)
}

// ---------------------------------------------------------------------------
// File schema

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    schema: u32,
    stops: Vec<u64>,
    hubs: Vec<u64>,
    time: Vec<Vec<f64>>,
    dist: Vec<Vec<f64>>,
    trips: Vec<TripRecord>,
    params: ParamsRecord,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TripRecord {
    id: TripId,
    origin: u64,
    destination: u64,
    riders: u32,
    kind: TripKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t_cur: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WaitRecord {
    Constant(f64),
    Matrix(Vec<Vec<f64>>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsRecord {
    theta: f64,
    omega: f64,
    bus_cost: BusCost,
    buses_per_leg: f64,
    wait: WaitRecord,
    ticket: f64,
    #[serde(default)]
    shuttle_between_hubs: bool,
    #[serde(default)]
    candidate_arcs: CandidateArcs,
    #[serde(default)]
    fixed_arcs: Vec<[u64; 2]>,
    #[serde(default = "default_true")]
    fixed_arc_costed: bool,
}

fn default_true() -> bool {
    true
}

impl InstanceFile {
    fn into_instance(self) -> Result<Instance> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                self.schema
            )));
        }
        let index: HashMap<u64, StopIdx> =
            self.stops.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let lookup = |id: u64, what: &str| {
            index
                .get(&id)
                .copied()
                .ok_or_else(|| Error::Validation(format!("unknown stop {id} in {what}")))
        };
        let hubs = self
            .hubs
            .iter()
            .map(|&h| lookup(h, "hubs"))
            .collect::<Result<Vec<_>>>()?;
        let time = Matrix::from_rows(&self.time)?;
        let dist = Matrix::from_rows(&self.dist)?;
        let trips = self
            .trips
            .into_iter()
            .map(|t| {
                let what = format!("trip {}", t.id);
                Ok(Trip {
                    id: t.id,
                    origin: lookup(t.origin, &what)?,
                    destination: lookup(t.destination, &what)?,
                    riders: t.riders,
                    kind: t.kind,
                    alpha: t.alpha,
                    t_cur: t.t_cur,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let p = self.params;
        let wait = match p.wait {
            WaitRecord::Constant(w) => Matrix::filled(hubs.len(), w),
            WaitRecord::Matrix(rows) => Matrix::from_rows(&rows)?,
        };
        let fixed_arcs = p
            .fixed_arcs
            .iter()
            .map(|&[h, l]| Ok((lookup(h, "fixed_arcs")?, lookup(l, "fixed_arcs")?)))
            .collect::<Result<Vec<_>>>()?;
        let params = CostParams {
            theta: p.theta,
            omega: p.omega,
            bus_cost: p.bus_cost,
            buses_per_leg: p.buses_per_leg,
            wait,
            ticket: p.ticket,
            shuttle_between_hubs: p.shuttle_between_hubs,
            candidate_arcs: p.candidate_arcs,
            fixed_arcs,
            fixed_arc_costed: p.fixed_arc_costed,
        };
        Instance::new(self.stops, hubs, time, dist, trips, params)
    }

    fn from_instance(inst: &Instance) -> Self {
        let id = |s: StopIdx| inst.stop_ids[s];
        let p = &inst.params;
        let h = inst.hubs.len();
        let constant_wait = (h > 0)
            .then(|| p.wait.get(0, 0))
            .filter(|&w0| (0..h).all(|i| (0..h).all(|j| p.wait.get(i, j) == w0)));
        let wait = match constant_wait {
            Some(w) => WaitRecord::Constant(w),
            None if h == 0 => WaitRecord::Constant(0.0),
            None => WaitRecord::Matrix(p.wait.to_rows()),
        };
        InstanceFile {
            schema: SCHEMA_VERSION,
            stops: inst.stop_ids.clone(),
            hubs: inst.hubs.iter().map(|&s| id(s)).collect(),
            time: inst.time.to_rows(),
            dist: inst.dist.to_rows(),
            trips: inst
                .trips
                .iter()
                .map(|t| TripRecord {
                    id: t.id,
                    origin: id(t.origin),
                    destination: id(t.destination),
                    riders: t.riders,
                    kind: t.kind,
                    alpha: t.alpha,
                    t_cur: t.t_cur,
                })
                .collect(),
            params: ParamsRecord {
                theta: p.theta,
                omega: p.omega,
                bus_cost: p.bus_cost,
                buses_per_leg: p.buses_per_leg,
                wait,
                ticket: p.ticket,
                shuttle_between_hubs: p.shuttle_between_hubs,
                candidate_arcs: p.candidate_arcs,
                fixed_arcs: p.fixed_arcs.iter().map(|&(a, b)| [id(a), id(b)]).collect(),
                fixed_arc_costed: p.fixed_arc_costed,
            },
        }
    }
}
