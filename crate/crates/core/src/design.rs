//! Network designs: sets of open candidate hub arcs.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::instance::{balanced, ArcId, Instance};

/// Hard cap on the number of free arcs for exhaustive enumeration.
pub const ENUMERATION_ARC_LIMIT: usize = 16;

/// A set of open candidate arcs, kept sorted.
///
/// Designs are ordered shortlex: fewer open arcs first, then by the sorted
/// arc-id sequence. Every tie-break between equally good designs uses this
/// order, which makes a design smaller than any of its strict supersets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Design {
    open: Vec<ArcId>,
}

impl Design {
    pub fn empty() -> Self {
        Design::default()
    }

    pub fn from_arcs<I: IntoIterator<Item = ArcId>>(arcs: I) -> Self {
        let mut open: Vec<ArcId> = arcs.into_iter().collect();
        open.sort_unstable();
        open.dedup();
        Design { open }
    }

    /// Design made of the instance's own fixed arcs.
    pub fn fixed(inst: &Instance) -> Self {
        Design { open: inst.fixed_arcs().to_vec() }
    }

    /// Every candidate arc open.
    pub fn full(inst: &Instance) -> Self {
        Design { open: (0..inst.arcs().len()).collect() }
    }

    pub fn arcs(&self) -> &[ArcId] {
        &self.open
    }

    pub fn len(&self) -> usize {
        self.open.len()
    }

    pub fn is_empty(&self) -> bool {
        self.open.is_empty()
    }

    pub fn contains(&self, arc: ArcId) -> bool {
        self.open.binary_search(&arc).is_ok()
    }

    pub fn union(&self, other: &Design) -> Design {
        Design::from_arcs(self.open.iter().chain(other.open.iter()).copied())
    }

    pub fn difference(&self, other: &Design) -> Design {
        Design { open: self.open.iter().copied().filter(|&a| !other.contains(a)).collect() }
    }

    /// Componentwise `self <= other`.
    pub fn is_subset(&self, other: &Design) -> bool {
        self.open.iter().all(|&a| other.contains(a))
    }

    pub fn is_weakly_connected(&self, inst: &Instance) -> bool {
        balanced(inst.arcs(), &self.open, inst.stop_count())
    }

    /// Checks arc ids, weak connectivity and that fixed arcs are open.
    pub fn validate(&self, inst: &Instance) -> Result<()> {
        if let Some(&a) = self.open.iter().find(|&&a| a >= inst.arcs().len()) {
            return Err(Error::InvalidDesign(format!("arc {a} is not a candidate arc")));
        }
        if !self.is_weakly_connected(inst) {
            return Err(Error::InvalidDesign("weak connectivity violated".into()));
        }
        if let Some(&a) = inst.fixed_arcs().iter().find(|&&a| !self.contains(a)) {
            return Err(Error::InvalidDesign(format!(
                "fixed arc {} is not open",
                inst.arcs()[a]
            )));
        }
        Ok(())
    }

    /// Short content hash of the open arc set.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for a in &self.open {
            hasher.update((*a as u64).to_le_bytes());
        }
        hex::encode(&hasher.finalize()[..8])
    }

    /// Open arcs as external stop-id pairs.
    pub fn to_stop_pairs(&self, inst: &Instance) -> Vec<[u64; 2]> {
        let ids = inst.stop_ids();
        self.open
            .iter()
            .map(|&a| {
                let arc = inst.arcs()[a];
                [ids[arc.from], ids[arc.to]]
            })
            .collect()
    }

    pub fn from_stop_pairs(inst: &Instance, pairs: &[[u64; 2]]) -> Result<Design> {
        let mut arcs = Vec::with_capacity(pairs.len());
        for &[h, l] in pairs {
            let arc = inst
                .stop_index(h)
                .zip(inst.stop_index(l))
                .and_then(|(h, l)| inst.arc_id(h, l))
                .ok_or_else(|| Error::InvalidDesign(format!("({h}, {l}) is not a candidate arc")))?;
            arcs.push(arc);
        }
        Ok(Design::from_arcs(arcs))
    }
}

impl Ord for Design {
    fn cmp(&self, other: &Self) -> Ordering {
        self.open.len().cmp(&other.open.len()).then_with(|| self.open.cmp(&other.open))
    }
}

impl PartialOrd for Design {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.open.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// Serialized form of a design.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DesignFile {
    pub tool_version: String,
    pub fingerprint: String,
    pub arcs: Vec<[u64; 2]>,
}

impl DesignFile {
    pub fn new(inst: &Instance, design: &Design) -> Self {
        DesignFile {
            tool_version: crate::TOOL_VERSION.to_string(),
            fingerprint: design.fingerprint(),
            arcs: design.to_stop_pairs(inst),
        }
    }
}

/// All weakly-connected designs containing `fixed` and the instance's own
/// fixed arcs, in shortlex order.
pub fn enumerate_designs(inst: &Instance, fixed: &Design) -> Result<Vec<Design>> {
    let base = fixed.union(&Design::fixed(inst));
    let free: Vec<ArcId> = (0..inst.arcs().len()).filter(|&a| !base.contains(a)).collect();
    if free.len() > ENUMERATION_ARC_LIMIT {
        return Err(Error::EnumerationCap { count: free.len(), limit: ENUMERATION_ARC_LIMIT });
    }
    let n = inst.stop_count();
    let mut degree = vec![0i64; n];
    for &a in base.arcs() {
        degree[inst.arcs()[a].from] += 1;
        degree[inst.arcs()[a].to] -= 1;
    }
    let mut designs = Vec::new();
    for mask in 0u32..(1u32 << free.len()) {
        let mut d = degree.clone();
        for (bit, &a) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                d[inst.arcs()[a].from] += 1;
                d[inst.arcs()[a].to] -= 1;
            }
        }
        if d.iter().all(|&x| x == 0) {
            let extra = free.iter().enumerate().filter(|(bit, _)| mask >> bit & 1 == 1).map(|(_, &a)| a);
            designs.push(Design::from_arcs(base.arcs().iter().copied().chain(extra)));
        }
    }
    designs.sort();
    Ok(designs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortlex_order() {
        let a = Design::from_arcs([5]);
        let b = Design::from_arcs([2, 5]);
        let c = Design::from_arcs([3]);
        assert!(a < b);
        assert!(c < a);
        assert!(Design::empty() < c);
        let mut v = vec![b.clone(), c.clone(), a.clone(), Design::empty()];
        v.sort();
        assert_eq!(v, vec![Design::empty(), c, a, b]);
    }

    #[test]
    fn set_operations() {
        let a = Design::from_arcs([3, 1, 1, 2]);
        assert_eq!(a.arcs(), &[1, 2, 3]);
        let b = Design::from_arcs([2, 4]);
        assert_eq!(a.union(&b).arcs(), &[1, 2, 3, 4]);
        assert_eq!(a.difference(&b).arcs(), &[1, 3]);
        assert!(Design::from_arcs([1, 3]).is_subset(&a));
        assert!(!b.is_subset(&a));
    }

    #[test]
    fn fingerprint_is_stable() {
        let a = Design::from_arcs([1, 2]);
        assert_eq!(a.fingerprint(), Design::from_arcs([2, 1]).fingerprint());
        assert_ne!(a.fingerprint(), Design::empty().fingerprint());
        assert_eq!(a.fingerprint().len(), 16);
    }
}
