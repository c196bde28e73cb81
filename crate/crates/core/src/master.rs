//! Benders master problem solved by combinatorial branch-and-bound.
//!
//! The master minimises `sum beta z + sum_r p_r max(0, max_c (base_c - coeff_c . z))`
//! over weakly-connected designs that contain the fixed arcs. A node fixes
//! some arcs to one or zero and leaves the rest free. Its bound evaluates
//! every cut with all free arcs open and no free investment paid, then adds,
//! per free arc, the smaller of its investment and the savings it was
//! credited with in the selected cuts. Both terms are valid, so the search is
//! exact.
//!
//! Designs tied within tolerance are resolved towards the shortlex-smallest
//! one, matching [`crate::design::Design`]'s ordering.

use crate::design::Design;
use crate::dfd::{BendersCut, CutPool};
use crate::error::{Error, Result};
use crate::instance::{ArcId, Instance, TripSet};
use crate::tol;

#[derive(Clone, Debug)]
pub struct MasterResult {
    pub design: Design,
    /// Optimal master value; a lower bound on the design objective of the
    /// trips that carry cuts.
    pub bound: f64,
    pub nodes: u64,
}

/// One trip's contribution to the master: its weight and its cuts.
pub struct MasterTrip<'c> {
    pub weight: f64,
    pub cuts: Vec<&'c BendersCut>,
}

/// Solves the master over the cuts in `pool` for the trips in `trips`.
///
/// Trips without cuts contribute nothing. The instance's own fixed arcs are
/// always forced open in addition to `fixed`.
pub fn solve_master(inst: &Instance, pool: &CutPool, trips: &TripSet, fixed: &Design) -> Result<MasterResult> {
    let mut rows = Vec::new();
    for &id in trips {
        let trip = inst.trip(id).ok_or(Error::UnknownTrip(id))?;
        rows.push(MasterTrip { weight: trip.weight(), cuts: pool.cuts(id).iter().collect() });
    }
    solve_master_with(inst, &rows, fixed, &[])
}

/// Outcome of a cutoff search over the master.
pub(crate) struct Probe {
    /// A design that beats the cutoff, if any.
    pub found: Option<Design>,
    /// Lower bound on the master optimum. When nothing was found it is
    /// within tolerance of the cutoff value.
    pub bound: f64,
    pub nodes: u64,
}

/// Looks for a design whose master value beats `cutoff`: lower beyond
/// tolerance, or tied and shortlex-smaller than the cutoff design. Stops at
/// the first one.
pub(crate) fn probe_master(
    inst: &Instance,
    trips: &[MasterTrip<'_>],
    fixed: &Design,
    cutoff: (f64, &Design),
) -> Probe {
    let problem = Problem::new(inst, trips);
    let mut search = Search::new(&problem, fixed);
    search.best = Some((cutoff.0, cutoff.1.clone()));
    search.stop_on_improve = true;
    search.run();
    if search.improved {
        let (_, design) = search.best.expect("improved incumbent");
        Probe { found: Some(design), bound: search.root_bound, nodes: search.nodes }
    } else {
        Probe { found: None, bound: search.floor.min(cutoff.0), nodes: search.nodes }
    }
}

/// Master solve with explicit trip rows and warm-start designs.
pub fn solve_master_with(
    inst: &Instance,
    trips: &[MasterTrip<'_>],
    fixed: &Design,
    warm: &[Design],
) -> Result<MasterResult> {
    let fixed = fixed.union(&Design::fixed(inst));
    if !fixed.is_weakly_connected(inst) {
        return Err(Error::InvalidDesign("fixed arcs violate weak connectivity".into()));
    }
    let problem = Problem::new(inst, trips);
    let mut search = Search::new(&problem, &fixed);
    for d in warm {
        if fixed.is_subset(d) && d.is_weakly_connected(inst) {
            let v = problem.value(d);
            search.offer(v, d.clone());
        }
    }
    // the fixed design itself is always feasible
    let v = problem.value(&fixed);
    search.offer(v, fixed.clone());

    search.run();
    let design = search.best.expect("fixed design is feasible").1;
    let bound = problem.value(&design);
    Ok(MasterResult { design, bound, nodes: search.nodes })
}

struct Problem {
    arc_count: usize,
    beta: Vec<f64>,
    tail: Vec<usize>,
    head: Vec<usize>,
    hub_count: usize,
    /// Cuts of trip `t` occupy `trip_cuts[t]`.
    trip_cuts: Vec<std::ops::Range<usize>>,
    trip_weight: Vec<f64>,
    base: Vec<f64>,
    coeffs: Vec<Vec<(ArcId, f64)>>,
    /// Inverted index: the cuts each arc appears in.
    arc_cuts: Vec<Vec<(usize, f64)>>,
}

impl Problem {
    fn new(inst: &Instance, trips: &[MasterTrip<'_>]) -> Self {
        let arc_count = inst.arcs().len();
        let hub_of = |s| inst.hub_position(s).expect("arc endpoint is a hub");
        let mut p = Problem {
            arc_count,
            beta: inst.weights().beta.clone(),
            tail: inst.arcs().iter().map(|a| hub_of(a.from)).collect(),
            head: inst.arcs().iter().map(|a| hub_of(a.to)).collect(),
            hub_count: inst.hubs().len(),
            trip_cuts: Vec::new(),
            trip_weight: Vec::new(),
            base: Vec::new(),
            coeffs: Vec::new(),
            arc_cuts: vec![Vec::new(); arc_count],
        };
        for t in trips {
            if t.cuts.is_empty() {
                continue;
            }
            let start = p.base.len();
            for cut in &t.cuts {
                let c = p.base.len();
                p.base.push(cut.base);
                p.coeffs.push(cut.coeffs.clone());
                for &(a, k) in &cut.coeffs {
                    p.arc_cuts[a].push((c, k));
                }
            }
            p.trip_cuts.push(start..p.base.len());
            p.trip_weight.push(t.weight);
        }
        p
    }

    /// Master objective of a complete design.
    fn value(&self, design: &Design) -> f64 {
        let mut v: f64 = design.arcs().iter().map(|&a| self.beta[a]).sum();
        for (t, range) in self.trip_cuts.iter().enumerate() {
            let mut best = 0.0f64;
            for c in range.clone() {
                let mut rhs = self.base[c];
                for &(a, k) in &self.coeffs[c] {
                    if design.contains(a) {
                        rhs -= k;
                    }
                }
                best = best.max(rhs);
            }
            v += self.trip_weight[t] * best;
        }
        v
    }
}

const ROOT_STEPS: usize = 200;
const NODE_STEPS: usize = 0;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Free,
    Zero,
    One,
}

struct Search<'p> {
    p: &'p Problem,
    status: Vec<Status>,
    /// Per cut: coefficient sum over arcs that are one or free.
    avail: Vec<f64>,
    /// Per cut: coefficient sum over arcs that are one.
    one_sum: Vec<f64>,
    out_one: Vec<i32>,
    in_one: Vec<i32>,
    out_free: Vec<i32>,
    in_free: Vec<i32>,
    unbalanced: usize,
    one_count: usize,
    beta_one: f64,
    best: Option<(f64, Design)>,
    nodes: u64,
    stop_on_improve: bool,
    improved: bool,
    /// Smallest bound or value among everything discarded so far.
    floor: f64,
    root_bound: f64,
    /// Multipliers of the hub balance constraints.
    lambda: Vec<f64>,
    // scratch
    agg: Vec<f64>,
    grad: Vec<f64>,
    relaxed: Vec<bool>,
    rbeta: Vec<f64>,
    choice: Vec<Option<usize>>,
    /// Per cut: weight charged in the bound.
    mu: Vec<f64>,
}

impl<'p> Search<'p> {
    fn new(p: &'p Problem, fixed: &Design) -> Self {
        let mut s = Search {
            p,
            status: vec![Status::Free; p.arc_count],
            avail: p.coeffs.iter().map(|c| c.iter().map(|&(_, k)| k).sum()).collect(),
            one_sum: vec![0.0; p.base.len()],
            out_one: vec![0; p.hub_count],
            in_one: vec![0; p.hub_count],
            out_free: vec![0; p.hub_count],
            in_free: vec![0; p.hub_count],
            unbalanced: 0,
            one_count: 0,
            beta_one: 0.0,
            best: None,
            nodes: 0,
            stop_on_improve: false,
            improved: false,
            floor: f64::INFINITY,
            root_bound: f64::NEG_INFINITY,
            lambda: vec![0.0; p.hub_count],
            agg: vec![0.0; p.arc_count],
            grad: vec![0.0; p.hub_count],
            relaxed: vec![false; p.arc_count],
            rbeta: vec![0.0; p.arc_count],
            choice: vec![None; p.trip_cuts.len()],
            mu: vec![0.0; p.base.len()],
        };
        for a in 0..p.arc_count {
            s.out_free[p.tail[a]] += 1;
            s.in_free[p.head[a]] += 1;
        }
        for &a in fixed.arcs() {
            s.set_one(a);
        }
        s
    }

    fn offer(&mut self, value: f64, design: Design) {
        let better = match &self.best {
            None => true,
            Some((v, d)) => value < *v - tol(*v) || (value <= *v + tol(*v) && design < *d),
        };
        if better {
            self.best = Some((value, design));
            self.improved = self.stop_on_improve;
        } else {
            self.floor = self.floor.min(value);
        }
    }

    fn prune(&mut self, bound: f64) {
        self.floor = self.floor.min(bound);
    }

    fn hub_balance(&self, h: usize) -> bool {
        self.out_one[h] == self.in_one[h]
    }

    fn locally_feasible(&self, h: usize) -> bool {
        self.out_one[h] <= self.in_one[h] + self.in_free[h] && self.in_one[h] <= self.out_one[h] + self.out_free[h]
    }

    fn set_one(&mut self, a: ArcId) -> Vec<(usize, f64)> {
        let (t, h) = (self.p.tail[a], self.p.head[a]);
        let before = [self.hub_balance(t), self.hub_balance(h)];
        self.status[a] = Status::One;
        self.out_free[t] -= 1;
        self.in_free[h] -= 1;
        self.out_one[t] += 1;
        self.in_one[h] += 1;
        self.one_count += 1;
        self.beta_one += self.p.beta[a];
        let mut trail = Vec::with_capacity(self.p.arc_cuts[a].len());
        for &(c, k) in &self.p.arc_cuts[a] {
            trail.push((c, self.one_sum[c]));
            self.one_sum[c] += k;
        }
        self.fix_balance_count(t, h, before);
        trail
    }

    fn unset_one(&mut self, a: ArcId, trail: Vec<(usize, f64)>, beta_before: f64) {
        let (t, h) = (self.p.tail[a], self.p.head[a]);
        let before = [self.hub_balance(t), self.hub_balance(h)];
        self.status[a] = Status::Free;
        self.out_free[t] += 1;
        self.in_free[h] += 1;
        self.out_one[t] -= 1;
        self.in_one[h] -= 1;
        self.one_count -= 1;
        self.beta_one = beta_before;
        for (c, v) in trail {
            self.one_sum[c] = v;
        }
        self.fix_balance_count(t, h, before);
    }

    fn fix_balance_count(&mut self, t: usize, h: usize, before: [bool; 2]) {
        let hubs = if t == h { vec![(t, before[0])] } else { vec![(t, before[0]), (h, before[1])] };
        for (x, was) in hubs {
            let now = self.hub_balance(x);
            match (was, now) {
                (true, false) => self.unbalanced += 1,
                (false, true) => self.unbalanced -= 1,
                _ => {}
            }
        }
    }

    fn set_zero(&mut self, a: ArcId) -> Vec<(usize, f64)> {
        self.status[a] = Status::Zero;
        self.out_free[self.p.tail[a]] -= 1;
        self.in_free[self.p.head[a]] -= 1;
        let mut trail = Vec::with_capacity(self.p.arc_cuts[a].len());
        for &(c, k) in &self.p.arc_cuts[a] {
            trail.push((c, self.avail[c]));
            self.avail[c] -= k;
        }
        trail
    }

    fn unset_zero(&mut self, a: ArcId, trail: Vec<(usize, f64)>) {
        self.status[a] = Status::Free;
        self.out_free[self.p.tail[a]] += 1;
        self.in_free[self.p.head[a]] += 1;
        for (c, v) in trail {
            self.avail[c] = v;
        }
    }

    #[inline]
    fn reduced_beta(&self, a: ArcId) -> f64 {
        self.p.beta[a] + self.lambda[self.p.tail[a]] - self.lambda[self.p.head[a]]
    }

    /// Charges each trip its full weight on one cut (or on nothing), picked
    /// greedily by marginal effect on the bound: the cut value with every
    /// free arc open, plus the part of the credited savings that free arcs
    /// cannot absorb with their investment. A second pass lets every trip
    /// choose again given the others.
    fn greedy_weights(&mut self) {
        let p = self.p;
        for a in 0..p.arc_count {
            self.rbeta[a] = self.reduced_beta(a);
        }
        self.agg.iter_mut().for_each(|x| *x = 0.0);
        self.choice.iter_mut().for_each(|c| *c = None);
        for _pass in 0..2 {
            for (t, range) in p.trip_cuts.iter().enumerate() {
                let w = p.trip_weight[t];
                if let Some(c) = self.choice[t] {
                    for &(a, k) in &p.coeffs[c] {
                        if self.status[a] == Status::Free {
                            self.agg[a] -= w * k;
                        }
                    }
                }
                let mut best = 0.0f64;
                let mut arg = None;
                for c in range.clone() {
                    // every marginal gain is at most the full credit
                    if w * (p.base[c] - self.one_sum[c]) <= best {
                        continue;
                    }
                    let mut m = w * (p.base[c] - self.avail[c]);
                    for &(a, k) in &p.coeffs[c] {
                        if self.status[a] == Status::Free {
                            let (have, cap) = (self.agg[a], self.rbeta[a]);
                            m += (have + w * k).min(cap) - have.min(cap);
                        }
                    }
                    if m > best {
                        best = m;
                        arg = Some(c);
                    }
                }
                self.choice[t] = arg;
                if let Some(c) = arg {
                    for &(a, k) in &p.coeffs[c] {
                        if self.status[a] == Status::Free {
                            self.agg[a] += w * k;
                        }
                    }
                }
            }
        }
        self.mu.iter_mut().for_each(|m| *m = 0.0);
        for (t, c) in self.choice.iter().enumerate() {
            if let Some(c) = *c {
                self.mu[c] = p.trip_weight[t];
            }
        }
    }

    /// Node bound at the current cut weights `mu` and multipliers `lambda`.
    ///
    /// Cut `c` of trip `r` is charged with weight `mu_c`, where the weights
    /// of a trip sum to at most its rider count. Free arcs are credited the
    /// savings of the charged cuts and opened in the relaxation when that
    /// credit exceeds their reduced investment. Fills `agg`, `relaxed`,
    /// and `grad` (hub imbalance of the relaxed solution).
    fn evaluate(&mut self) -> f64 {
        let p = self.p;
        for a in 0..p.arc_count {
            self.rbeta[a] = self.reduced_beta(a);
        }
        self.agg.iter_mut().for_each(|x| *x = 0.0);
        let mut total = self.beta_one;
        for h in 0..p.hub_count {
            let imbalance = self.out_one[h] - self.in_one[h];
            total += self.lambda[h] * f64::from(imbalance);
            self.grad[h] = f64::from(imbalance);
        }
        for c in 0..p.base.len() {
            let m = self.mu[c];
            if m > 0.0 {
                total += m * (p.base[c] - self.avail[c]);
                for &(a, k) in &p.coeffs[c] {
                    if self.status[a] == Status::Free {
                        self.agg[a] += m * k;
                    }
                }
            }
        }
        for a in 0..p.arc_count {
            self.relaxed[a] = false;
            if self.status[a] == Status::Free {
                let b = self.rbeta[a];
                if b < self.agg[a] {
                    total += b;
                    self.relaxed[a] = true;
                    self.grad[p.tail[a]] += 1.0;
                    self.grad[p.head[a]] -= 1.0;
                } else {
                    total += self.agg[a];
                }
            }
        }
        total
    }

    /// Best bound over a few subgradient steps on the balance multipliers,
    /// with the greedy cut choice redone at every step.
    ///
    /// The `lambda` shifts cancel on balanced designs.
    fn bound(&mut self, steps: usize) -> f64 {
        let p = self.p;
        let start = self.lambda.clone();
        self.greedy_weights();
        let first = self.evaluate();
        let mut best = first;
        let mut best_lambda = None;
        let mut rate = 1.0;
        let mut stale = 0;
        for _ in 0..steps {
            if !self.worth(best) {
                break;
            }
            let norm2: f64 = self.grad.iter().map(|g| g * g).sum();
            if norm2 == 0.0 {
                break;
            }
            let target = match &self.best {
                Some((v, _)) => *v,
                None => best + 0.05 * best.abs().max(1.0),
            };
            let step = rate * (target - best).max(tol(best)) / norm2;
            for h in 0..p.hub_count {
                self.lambda[h] += step * self.grad[h];
            }
            self.greedy_weights();
            let b = self.evaluate();
            if b > best {
                best = b;
                best_lambda = Some(self.lambda.clone());
                stale = 0;
            } else {
                stale += 1;
                if stale >= 2 {
                    rate *= 0.5;
                    stale = 0;
                }
            }
        }
        // leave the scratch state consistent with the returned bound
        let target = best_lambda.unwrap_or(start);
        if target != self.lambda {
            self.lambda = target;
            self.greedy_weights();
            best = self.evaluate();
        }
        best
    }

    fn fix(&mut self, a: ArcId, open: bool) -> Undo {
        if open {
            let beta_before = self.beta_one;
            Undo::One(a, self.set_one(a), beta_before)
        } else {
            Undo::Zero(a, self.set_zero(a))
        }
    }

    fn undo(&mut self, u: Undo) {
        match u {
            Undo::One(a, trail, beta_before) => self.unset_one(a, trail, beta_before),
            Undo::Zero(a, trail) => self.unset_zero(a, trail),
        }
    }

    /// Value of the design that closes every free arc.
    fn completion_value(&self) -> f64 {
        let p = self.p;
        let mut total = self.beta_one;
        for (t, range) in p.trip_cuts.iter().enumerate() {
            let mut best = 0.0f64;
            for c in range.clone() {
                best = best.max(p.base[c] - self.one_sum[c]);
            }
            total += p.trip_weight[t] * best;
        }
        total
    }

    fn one_design(&self) -> Design {
        Design::from_arcs((0..self.p.arc_count).filter(|&a| self.status[a] == Status::One))
    }

    /// Whether a subtree with this bound can still improve the incumbent.
    fn worth(&self, bound: f64) -> bool {
        let Some((v, d)) = &self.best else { return true };
        if bound > *v + tol(*v) {
            return false;
        }
        if bound >= *v - tol(*v) {
            // only a tie can win, and only a shortlex-smaller one
            return match self.one_count.cmp(&d.len()) {
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => self.unbalanced == 0 && self.one_design() < *d,
                std::cmp::Ordering::Less => true,
            };
        }
        true
    }

    fn run(&mut self) {
        self.root_bound = self.bound(ROOT_STEPS);
        self.dfs();
    }

    fn dfs(&mut self) {
        self.nodes += 1;
        let bound = self.bound(NODE_STEPS);
        if !self.worth(bound) {
            self.prune(bound);
            return;
        }
        if self.grad.iter().all(|&g| g == 0.0) {
            // the relaxed solution is a design; try it as an incumbent
            let relaxed = Design::from_arcs((0..self.p.arc_count).filter(|&a| match self.status[a] {
                Status::One => true,
                Status::Zero => false,
                Status::Free => self.relaxed[a],
            }));
            let v = self.p.value(&relaxed);
            self.offer(v, relaxed);
            if self.improved {
                return;
            }
            if !self.worth(bound) {
                self.prune(bound);
                return;
            }
        }
        if self.unbalanced == 0 {
            let v = self.completion_value();
            self.offer(v, self.one_design());
            if self.improved {
                return;
            }
            if v <= bound + tol(bound) {
                self.prune(bound);
                return;
            }
        }

        let p = self.p;
        // Reduced-cost fixing: with the bound's weights unchanged, forcing a
        // free arc open adds max(0, beta' - credit) and forcing it closed
        // adds max(0, credit - beta').
        if let Some((v, _)) = &self.best {
            let cutoff = *v + tol(*v);
            let mut forced = Vec::new();
            for a in 0..p.arc_count {
                if self.status[a] == Status::Free {
                    let d = self.agg[a] - self.rbeta[a];
                    if d > 0.0 && bound + d > cutoff {
                        forced.push((a, true));
                    } else if d < 0.0 && bound - d > cutoff {
                        forced.push((a, false));
                    }
                }
            }
            if !forced.is_empty() {
                let mut undo = Vec::with_capacity(forced.len());
                let mut feasible = true;
                for &(a, open) in &forced {
                    undo.push(self.fix(a, open));
                    if !(self.locally_feasible(p.tail[a]) && self.locally_feasible(p.head[a])) {
                        feasible = false;
                        break;
                    }
                }
                // designs outside the forced fixings exceed the cutoff
                if feasible {
                    self.dfs();
                }
                while let Some(u) = undo.pop() {
                    self.undo(u);
                }
                return;
            }
        }

        let mut pick: Option<(ArcId, f64)> = None;
        for a in 0..p.arc_count {
            if self.status[a] != Status::Free {
                continue;
            }
            let score = self.agg[a];
            if pick.is_none_or(|(_, g)| score > g) {
                pick = Some((a, score));
            }
        }
        let Some((arc, _)) = pick else { return };
        let one_first = self.agg[arc] > self.rbeta[arc];
        for branch in 0..2 {
            let open = (branch == 0) == one_first;
            let u = self.fix(arc, open);
            if self.locally_feasible(p.tail[arc]) && self.locally_feasible(p.head[arc]) {
                self.dfs();
            }
            self.undo(u);
            if self.improved {
                return;
            }
        }
    }
}

enum Undo {
    One(ArcId, Vec<(usize, f64)>, f64),
    Zero(ArcId, Vec<(usize, f64)>),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::enumerate_designs;
    use crate::fixtures::four_stop;

    fn cut(trip: u64, base: f64, coeffs: Vec<(ArcId, f64)>) -> BendersCut {
        BendersCut { trip, base, coeffs }
    }

    #[test]
    fn empty_pool_gives_fixed_design() {
        let inst = four_stop(2.0, vec![]);
        let r = solve_master_with(&inst, &[], &Design::empty(), &[]).unwrap();
        assert_eq!(r.design, Design::empty());
        assert_eq!(r.bound, 0.0);
    }

    #[test]
    fn opens_cycle_when_cut_pays_for_it() {
        let inst = four_stop(2.0, vec![]);
        let a12 = inst.arc_id(1, 2).unwrap();
        let c = cut(0, 18.5, vec![(a12, 4.75)]);
        let rows = [MasterTrip { weight: 1.0, cuts: vec![&c] }];
        let r = solve_master_with(&inst, &rows, &Design::empty(), &[]).unwrap();
        assert_eq!(r.design, Design::full(&inst));
        assert!((r.bound - 17.75).abs() < 1e-12);
    }

    #[test]
    fn keeps_empty_design_when_cycle_too_expensive() {
        let inst = four_stop(3.0, vec![]);
        let a12 = inst.arc_id(1, 2).unwrap();
        let c = cut(0, 18.5, vec![(a12, 4.75)]);
        let rows = [MasterTrip { weight: 1.0, cuts: vec![&c] }];
        let r = solve_master_with(&inst, &rows, &Design::empty(), &[]).unwrap();
        assert_eq!(r.design, Design::empty());
        assert_eq!(r.bound, 18.5);
    }

    #[test]
    fn matches_enumeration_on_synthetic_cuts() {
        use rand::{Rng, SeedableRng};
        let inst = crate::synthetic::generate_synthetic(&crate::GeneratorConfig::tiny(6, 3, 1, 0), 5).unwrap();
        let designs = enumerate_designs(&inst, &Design::empty()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..40 {
            let mut cuts = Vec::new();
            for t in 0..4u64 {
                for _ in 0..3 {
                    let mut coeffs = Vec::new();
                    for a in 0..inst.arcs().len() {
                        if rng.gen_bool(0.4) {
                            coeffs.push((a, rng.gen_range(0.0..300.0)));
                        }
                    }
                    cuts.push(cut(t, rng.gen_range(0.0..800.0), coeffs));
                }
            }
            let rows: Vec<MasterTrip> = (0..4)
                .map(|t| MasterTrip { weight: 1.0 + t as f64, cuts: cuts[t * 3..t * 3 + 3].iter().collect() })
                .collect();
            let problem = Problem::new(&inst, &rows);
            let values: Vec<f64> = designs.iter().map(|d| problem.value(d)).collect();
            let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let expect = designs
                .iter()
                .zip(&values)
                .find(|(_, &v)| v <= min + tol(min))
                .unwrap()
                .0
                .clone();
            let r = solve_master_with(&inst, &rows, &Design::empty(), &[]).unwrap();
            assert!((r.bound - min).abs() <= tol(min), "{} vs {}", r.bound, min);
            assert_eq!(r.design, expect);
        }
    }
}
