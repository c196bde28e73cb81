//! Elementary circuits of a directed graph (Johnson's algorithm).

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Default cap on the number of reported cycles.
pub const CYCLE_CAP: usize = 100_000;

/// An elementary directed cycle, stored as its vertex sequence starting at
/// the smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    pub nodes: Vec<usize>,
}

impl Cycle {
    /// Consecutive pairs, closing back to the first vertex.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let n = self.nodes.len();
        (0..n).map(|i| (self.nodes[i], self.nodes[(i + 1) % n])).collect()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Every elementary cycle of the digraph given by `arcs`, ordered by length
/// and then by vertex sequence. Self-loops are ignored.
pub fn find_cycles(arcs: &[(usize, usize)], cap: usize) -> Result<Vec<Cycle>> {
    let mut verts: BTreeSet<usize> = BTreeSet::new();
    for &(a, b) in arcs {
        verts.insert(a);
        verts.insert(b);
    }
    let verts: Vec<usize> = verts.into_iter().collect();
    let idx = |v: usize| verts.binary_search(&v).expect("known vertex");
    let n = verts.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in arcs {
        if a != b {
            adj[idx(a)].push(idx(b));
        }
    }
    for row in &mut adj {
        row.sort_unstable();
        row.dedup();
    }

    let mut out: Vec<Cycle> = Vec::new();
    let mut j = Johnson {
        adj: &adj,
        blocked: vec![false; n],
        blist: vec![Vec::new(); n],
        stack: Vec::new(),
        start: 0,
        found: Vec::new(),
        cap,
        overflow: false,
    };
    // Vertices are processed in increasing order; each search only uses
    // vertices not smaller than the start, so each cycle is reported once,
    // starting at its smallest vertex.
    for s in 0..n {
        j.start = s;
        for v in s..n {
            j.blocked[v] = false;
            j.blist[v].clear();
        }
        j.circuit(s);
        if j.overflow {
            return Err(Error::CycleCap(cap));
        }
    }
    for c in j.found {
        out.push(Cycle { nodes: c.into_iter().map(|i| verts[i]).collect() });
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.nodes.cmp(&b.nodes)));
    Ok(out)
}

struct Johnson<'a> {
    adj: &'a [Vec<usize>],
    blocked: Vec<bool>,
    blist: Vec<Vec<usize>>,
    stack: Vec<usize>,
    start: usize,
    found: Vec<Vec<usize>>,
    cap: usize,
    overflow: bool,
}

impl Johnson<'_> {
    fn circuit(&mut self, v: usize) -> bool {
        let mut closed = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for i in 0..self.adj[v].len() {
            if self.overflow {
                break;
            }
            let w = self.adj[v][i];
            if w < self.start {
                continue;
            }
            if w == self.start {
                if self.found.len() >= self.cap {
                    self.overflow = true;
                    break;
                }
                self.found.push(self.stack.clone());
                closed = true;
            } else if !self.blocked[w] && self.circuit(w) {
                closed = true;
            }
        }
        if closed {
            self.unblock(v);
        } else {
            for i in 0..self.adj[v].len() {
                let w = self.adj[v][i];
                if w >= self.start && !self.blist[w].contains(&v) {
                    self.blist[w].push(v);
                }
            }
        }
        self.stack.pop();
        closed
    }

    fn unblock(&mut self, u: usize) {
        let mut work = vec![u];
        while let Some(x) = work.pop() {
            if !self.blocked[x] {
                continue;
            }
            self.blocked[x] = false;
            work.extend(std::mem::take(&mut self.blist[x]));
        }
    }
}
