use std::collections::{BTreeSet, HashMap, HashSet};

use robust_duopoly::model::{BestReplyMap, UncertaintySet};

pub fn map(b_hi: f64, b_lo: f64, g_hi: f64, g_lo: f64) -> BestReplyMap {
    BestReplyMap::new(UncertaintySet::unit(b_hi, b_lo, g_hi, g_lo).unwrap()).unwrap()
}

/// Orbits of `(x, y) -> (f(y), f(x))` on all pairs of periodic points, with
/// `f` read off the cycle lists.
pub fn brute_force_orbits(cycles: &[Vec<f64>]) -> Vec<BTreeSet<(u64, u64)>> {
    let mut next = HashMap::new();
    for c in cycles {
        for (i, x) in c.iter().enumerate() {
            next.insert(x.to_bits(), c[(i + 1) % c.len()].to_bits());
        }
    }
    let pts: Vec<u64> = next.keys().copied().collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &x in &pts {
        for &y in &pts {
            if seen.contains(&(x, y)) {
                continue;
            }
            let mut orbit = BTreeSet::new();
            let mut p = (x, y);
            while orbit.insert(p) {
                seen.insert(p);
                p = (next[&p.1], next[&p.0]);
            }
            out.push(orbit);
        }
    }
    out
}
