//! Can a supply profile serve a set of loads at all — and if so, schedule it.
//!
//! The verdict is a pure majorization test between the duration vector and
//! the sorted supply ([`is_adequate`], [`is_exactly_adequate`]): supply can
//! be rearranged freely in time without changing the answer. A concrete
//! schedule comes from least-laxity-first ([`llf_allocate`]), which serves
//! the loads closest to missing their deadline in every slot and succeeds
//! whenever the supply is adequate. [`flow_adequacy_oracle`] answers the
//! same feasibility question by maximum flow with no majorization anywhere
//! in the path, which is what makes it worth keeping as a cross-check.

use crate::demand::{DemandProfile, DurationVector, SupplyProfile};
use crate::error::{Error, Result};
use crate::majorization::{first_tail_violation, majorizes, weakly_majorizes};

/// Binary load×slot schedule: `served(i, t)` says load `i` draws 1 kW in slot `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    loads: usize,
    horizon: usize,
    bits: Vec<u8>,
}

impl Allocation {
    fn zeroed(loads: usize, horizon: usize) -> Self {
        Self {
            loads,
            horizon,
            bits: vec![0; loads * horizon],
        }
    }

    /// Builds an allocation from dense 0/1 rows (one row per load).
    pub fn from_rows(rows: &[Vec<u8>], horizon: usize) -> Result<Self> {
        let mut alloc = Allocation::zeroed(rows.len(), horizon);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != horizon {
                return Err(Error::LengthMismatch {
                    left: row.len(),
                    right: horizon,
                });
            }
            for (t, &v) in row.iter().enumerate() {
                if v > 1 {
                    return Err(Error::NonBinaryEntry { row: i, slot: t });
                }
                alloc.bits[i * horizon + t] = v;
            }
        }
        Ok(alloc)
    }

    pub fn loads(&self) -> usize {
        self.loads
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn served(&self, load: usize, slot: usize) -> bool {
        self.bits[load * self.horizon + slot] == 1
    }

    /// Dense row-major copy, one `Vec<u8>` of 0/1 per load.
    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.loads)
            .map(|i| self.bits[i * self.horizon..(i + 1) * self.horizon].to_vec())
            .collect()
    }

    pub fn row_sums(&self) -> Vec<u32> {
        (0..self.loads)
            .map(|i| {
                self.bits[i * self.horizon..(i + 1) * self.horizon]
                    .iter()
                    .map(|&b| u32::from(b))
                    .sum()
            })
            .collect()
    }

    pub fn column_sums(&self) -> Vec<u32> {
        let mut cols = vec![0u32; self.horizon];
        for i in 0..self.loads {
            for (t, c) in cols.iter_mut().enumerate() {
                *c += u32::from(self.bits[i * self.horizon + t]);
            }
        }
        cols
    }

    /// Service interruptions per load: how many idle gaps sit strictly inside
    /// the load's first..last served span. Diagnostic only — duration service
    /// never promises contiguity.
    pub fn interruption_counts(&self) -> Vec<u32> {
        (0..self.loads)
            .map(|i| {
                let row = &self.bits[i * self.horizon..(i + 1) * self.horizon];
                let Some(first) = row.iter().position(|&b| b == 1) else {
                    return 0;
                };
                let last = row.iter().rposition(|&b| b == 1).unwrap();
                let mut gaps = 0;
                let mut in_gap = false;
                for &b in &row[first..=last] {
                    if b == 0 && !in_gap {
                        gaps += 1;
                    }
                    in_gap = b == 0;
                }
                gaps
            })
            .collect()
    }
}

/// Supply can serve every load and is fully consumed doing so.
pub fn is_exactly_adequate(p: &SupplyProfile, d: &DurationVector) -> Result<bool> {
    majorizes(d.counts(), p.slots())
}

/// Supply can serve every load (surplus allowed).
pub fn is_adequate(p: &SupplyProfile, d: &DurationVector) -> Result<bool> {
    weakly_majorizes(d.counts(), p.slots())
}

/// Least-laxity-first schedule. A load's laxity at slot `t` is the slack
/// `(T − t) − remaining_i`; each slot serves the `p_t` unfinished loads with
/// the least slack, breaking ties toward the lower load index. Succeeds for
/// every adequate supply; inadequate supply errors with the first violated
/// demand tail. Surplus power is left unassigned.
pub fn llf_allocate(p: &SupplyProfile, h: &DemandProfile) -> Result<Allocation> {
    if p.horizon() != h.horizon() {
        return Err(Error::LengthMismatch {
            left: p.horizon(),
            right: h.horizon(),
        });
    }
    let d = h.duration_vector();
    if let Some(tail) = first_tail_violation(d.counts(), p.slots())? {
        return Err(Error::Inadequate { tail });
    }

    let horizon = h.horizon();
    let mut remaining: Vec<u32> = h.durations().to_vec();
    let mut alloc = Allocation::zeroed(h.load_count(), horizon);
    let mut order: Vec<usize> = Vec::with_capacity(h.load_count());
    for (t, &power) in p.slots().iter().enumerate() {
        let slack_budget = (horizon - t) as i64;
        order.clear();
        order.extend((0..remaining.len()).filter(|&i| remaining[i] > 0));
        for &i in &order {
            if slack_budget - i64::from(remaining[i]) < 0 {
                return Err(Error::NegativeLaxity { load: i, slot: t });
            }
        }
        // Least laxity = most remaining work; ties fall back to load index
        // because the sort is stable over an index-ordered list.
        order.sort_by_key(|&i| slack_budget - i64::from(remaining[i]));
        for &i in order.iter().take(power as usize) {
            alloc.bits[i * horizon + t] = 1;
            remaining[i] -= 1;
        }
    }
    debug_assert!(remaining.iter().all(|&r| r == 0));
    Ok(alloc)
}

/// Both membership conditions of a valid schedule: every load gets exactly
/// its duration, no slot exceeds its supply. Dimension mismatches are false.
pub fn verify_allocation(a: &Allocation, p: &SupplyProfile, h: &DemandProfile) -> bool {
    if a.loads() != h.load_count() || a.horizon() != p.horizon() || h.horizon() != p.horizon() {
        return false;
    }
    a.row_sums() == h.durations()
        && a.column_sums()
            .iter()
            .zip(p.slots())
            .all(|(&used, &cap)| used <= cap)
}

/// Strict mode: additionally requires every slot's supply fully consumed.
pub fn verify_allocation_exact(a: &Allocation, p: &SupplyProfile, h: &DemandProfile) -> bool {
    verify_allocation(a, p, h) && a.column_sums() == p.slots()
}

/// Feasibility via maximum flow, with no majorization in the path: source →
/// load `i` (capacity `h_i`), load → every slot (capacity 1), slot `t` → sink
/// (capacity `p_t`). Serving everyone means pushing `Σ h_i` units.
pub fn flow_adequacy_oracle(p: &SupplyProfile, h: &DemandProfile) -> bool {
    let n = h.load_count();
    let t = p.horizon();
    let nodes = n + t + 2;
    let (source, sink) = (0, nodes - 1);
    let mut cap = vec![vec![0i64; nodes]; nodes];
    for (i, &hi) in h.durations().iter().enumerate() {
        cap[source][1 + i] = i64::from(hi);
        for s in 0..t {
            cap[1 + i][1 + n + s] = 1;
        }
    }
    for (s, &ps) in p.slots().iter().enumerate() {
        cap[1 + n + s][sink] = i64::from(ps);
    }
    max_flow(&mut cap, source, sink) == h.total_energy() as i64
}

/// Edmonds–Karp on a dense capacity matrix; mutates `cap` into residuals.
pub(crate) fn max_flow(cap: &mut [Vec<i64>], source: usize, sink: usize) -> i64 {
    let nodes = cap.len();
    let mut total = 0;
    loop {
        let mut parent = vec![usize::MAX; nodes];
        parent[source] = source;
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for v in 0..nodes {
                if parent[v] == usize::MAX && cap[u][v] > 0 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[sink] == usize::MAX {
            return total;
        }
        let mut bottleneck = i64::MAX;
        let mut v = sink;
        while v != source {
            bottleneck = bottleneck.min(cap[parent[v]][v]);
            v = parent[v];
        }
        let mut v = sink;
        while v != source {
            cap[parent[v]][v] -= bottleneck;
            cap[v][parent[v]] += bottleneck;
            v = parent[v];
        }
        total += bottleneck;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(h: &[u32], t: usize) -> DemandProfile {
        DemandProfile::new(h.to_vec(), t).unwrap()
    }

    fn supply(p: &[u32]) -> SupplyProfile {
        SupplyProfile::new(p.to_vec())
    }

    #[test]
    fn verdicts_on_example_instance() {
        let d = profile(&[1, 2, 2, 3, 6], 6).duration_vector();
        let good = supply(&[1, 5, 3, 1, 2, 2]);
        let bad = supply(&[2, 5, 3, 2, 2, 0]);
        assert_eq!(is_exactly_adequate(&good, &d), Ok(true));
        assert_eq!(is_adequate(&good, &d), Ok(true));
        assert_eq!(is_exactly_adequate(&bad, &d), Ok(false));
        assert_eq!(is_adequate(&bad, &d), Ok(false));
        assert_eq!(is_adequate(&supply(&[9; 6]), &d), Ok(true));
        let nonincreasing = DurationVector::new(vec![3, 2, 0], 4).unwrap();
        assert_eq!(
            is_exactly_adequate(&supply(&[0, 2, 3]), &nonincreasing),
            Ok(true)
        );
    }

    #[test]
    fn llf_schedules_the_example_instance() {
        let h = profile(&[1, 2, 2, 3, 6], 6);
        let p = supply(&[1, 5, 3, 1, 2, 2]);
        let a = llf_allocate(&p, &h).unwrap();
        assert!(verify_allocation(&a, &p, &h));
        // Exactly adequate instance: the schedule consumes all 14 units.
        assert!(verify_allocation_exact(&a, &p, &h));
    }

    #[test]
    fn llf_rejects_inadequate_supply_with_tail_index() {
        let h = profile(&[1, 2, 2, 3, 6], 6);
        let p = supply(&[2, 5, 3, 2, 2, 0]);
        assert_eq!(llf_allocate(&p, &h), Err(Error::Inadequate { tail: 5 }));
    }

    #[test]
    fn llf_trivial_cases() {
        let a = llf_allocate(&supply(&[0, 0]), &profile(&[0, 0], 2)).unwrap();
        assert_eq!(a.rows(), vec![vec![0, 0], vec![0, 0]]);

        let forced = llf_allocate(&supply(&[1, 1]), &profile(&[2], 2)).unwrap();
        assert_eq!(forced.rows(), vec![vec![1, 1]]);
    }

    #[test]
    fn verify_rejects_bad_allocations() {
        let h = profile(&[1], 1);
        let zero = Allocation::from_rows(&[vec![0]], 1).unwrap();
        assert!(!verify_allocation(&zero, &supply(&[1]), &h));

        let h2 = profile(&[2], 2);
        let a = Allocation::from_rows(&[vec![1, 1]], 2).unwrap();
        assert!(!verify_allocation(&a, &supply(&[1, 0]), &h2));
        assert!(verify_allocation(&a, &supply(&[1, 1]), &h2));
    }

    #[test]
    fn flow_oracle_agrees_on_example_instance() {
        let h = profile(&[1, 2, 2, 3, 6], 6);
        assert!(flow_adequacy_oracle(&supply(&[1, 5, 3, 1, 2, 2]), &h));
        assert!(!flow_adequacy_oracle(&supply(&[2, 5, 3, 2, 2, 0]), &h));
        assert!(flow_adequacy_oracle(&supply(&[0]), &profile(&[0], 1)));
    }

    #[test]
    fn interruption_counts_find_gaps() {
        let a = Allocation::from_rows(
            &[vec![1, 0, 1, 1, 0, 1], vec![0, 1, 1, 0, 0, 0], vec![0; 6]],
            6,
        )
        .unwrap();
        assert_eq!(a.interruption_counts(), vec![2, 0, 0]);
    }
}
