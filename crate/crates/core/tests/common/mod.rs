//! Independent oracles shared by the integration suites.
//!
//! Everything here recomputes results from first principles — feasibility by
//! max-flow on the load/slot bipartite graph, optima by exhaustive
//! enumeration — deliberately avoiding the library's own tail-sum shortcuts,
//! so agreement between the two routes is meaningful.

#![allow(dead_code)]

use flexload::rational::{Rational, rat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Maximum number of load-slot service units deliverable from `supply`:
/// max-flow on source → load (capacity = duration) → slot (capacity 1 per
/// pair) → sink (capacity = supply). Identical loads are interchangeable, so
/// a group of `k` duration-`h` loads shares one node with `k·h` inflow and a
/// per-slot capacity of `k` — the classical aggregation with the same value.
pub fn max_units_served(supply: &[u32], durations: &[u32]) -> u64 {
    let mut groups: Vec<(u32, i64)> = Vec::new();
    for &h in durations {
        if h == 0 {
            continue;
        }
        match groups.iter_mut().find(|(d, _)| *d == h) {
            Some((_, k)) => *k += 1,
            None => groups.push((h, 1)),
        }
    }
    let slots = supply.len();
    let nodes = 2 + groups.len() + slots;
    let (source, sink) = (0, nodes - 1);
    let group_node = |g: usize| 1 + g;
    let slot_node = |t: usize| 1 + groups.len() + t;

    let mut cap = vec![0i64; nodes * nodes];
    for (g, &(h, k)) in groups.iter().enumerate() {
        cap[source * nodes + group_node(g)] = i64::from(h) * k;
        for t in 0..slots {
            cap[group_node(g) * nodes + slot_node(t)] = k;
        }
    }
    for (t, &p) in supply.iter().enumerate() {
        cap[slot_node(t) * nodes + sink] = i64::from(p);
    }

    let mut flow = 0u64;
    let mut parent = vec![usize::MAX; nodes];
    loop {
        // Breadth-first search for any augmenting path.
        parent.fill(usize::MAX);
        parent[source] = source;
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for w in 0..nodes {
                if parent[w] == usize::MAX && cap[v * nodes + w] > 0 {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        if parent[sink] == usize::MAX {
            return flow;
        }
        let mut bottleneck = i64::MAX;
        let mut w = sink;
        while w != source {
            bottleneck = bottleneck.min(cap[parent[w] * nodes + w]);
            w = parent[w];
        }
        let mut w = sink;
        while w != source {
            cap[parent[w] * nodes + w] -= bottleneck;
            cap[w * nodes + parent[w]] += bottleneck;
            w = parent[w];
        }
        flow += bottleneck as u64;
    }
}

pub fn serves_fully(supply: &[u32], durations: &[u32]) -> bool {
    let want: u64 = durations.iter().map(|&h| u64::from(h)).sum();
    max_units_served(supply, durations) == want
}

/// Fewest purchased units needed on top of `supply` to serve every duration:
/// purchases can top up any slot, so the deficit is simply the unserved part
/// of the flow.
pub fn min_extra_units(supply: &[u32], durations: &[u32]) -> u64 {
    let want: u64 = durations.iter().map(|&h| u64::from(h)).sum();
    want - max_units_served(supply, durations)
}

/// Per-load durations implied by slot-wise load counts, computed the direct
/// way: load `i` (0-based) needs one slot for every count still above `i`.
pub fn expand_counts(counts: &[u32]) -> Vec<u32> {
    let loads = counts.first().copied().unwrap_or(0);
    (0..loads)
        .map(|i| counts.iter().filter(|&&c| c > i).count() as u32)
        .collect()
}

/// Visit every non-increasing vector of the given length with entries ≤ cap.
pub fn for_each_diminishing(len: usize, cap: u32, visit: &mut dyn FnMut(&[u32])) {
    fn go(buf: &mut Vec<u32>, len: usize, cap: u32, visit: &mut dyn FnMut(&[u32])) {
        if buf.len() == len {
            visit(buf);
            return;
        }
        for v in 0..=cap {
            buf.push(v);
            go(buf, len, v, visit);
            buf.pop();
        }
    }
    go(&mut Vec::with_capacity(len), len, cap, visit);
}

/// Exhaustive welfare maximum over every duration-count vector the population
/// admits, costing purchases at `c` per unit with the flow-based minimum.
pub fn brute_welfare(r: &[u32], population: u32, values: &[Rational], c: Rational) -> Rational {
    let mut best = None::<Rational>;
    for_each_diminishing(r.len(), population, &mut |counts| {
        let durations = expand_counts(counts);
        let gross = durations
            .iter()
            .fold(rat(0), |acc, &h| acc + values[h as usize]);
        let bought = min_extra_units(r, &durations);
        let w = gross - c * rat(bought as i64);
        if best.is_none_or(|b| w > b) {
            best = Some(w);
        }
    });
    best.expect("the all-zero vector is always visited")
}
