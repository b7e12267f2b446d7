//! Minimum-cost supplemental power, with or without foresight.
//!
//! Given demand `d` and a base supply `p` that may fall short, the cheapest
//! repair buys exactly the worst sorted-tail deficit
//! `max_t (Σ_{s≥t} (d_s − p↓_s))⁺` at unit price `c` — and, remarkably, the
//! same total suffices even when the supply is revealed one slot at a time
//! ([`runtime_purchase`]): buying the per-slot minimum that keeps the
//! revealed prefix able to cover the matching demand tail never pays more
//! than an oracle that saw the whole profile upfront.

use crate::adequacy::{Allocation, llf_allocate};
use crate::demand::{DurationVector, SupplyProfile};
use crate::error::{Error, Result};
use crate::rational::{Rational, is_nonnegative, rat};

/// Per-slot purchases plus their exact cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PurchasePlan {
    pub purchases: Vec<u32>,
    pub unit_price: Rational,
    pub total_cost: Rational,
}

impl PurchasePlan {
    fn new(purchases: Vec<u32>, unit_price: Rational) -> Self {
        let units: u64 = purchases.iter().map(|&a| u64::from(a)).sum();
        let total_cost = unit_price * rat(units as i64);
        Self {
            purchases,
            unit_price,
            total_cost,
        }
    }

    pub fn units(&self) -> u64 {
        self.purchases.iter().map(|&a| u64::from(a)).sum()
    }
}

fn check_price(c: Rational) -> Result<()> {
    if is_nonnegative(c) {
        Ok(())
    } else {
        Err(Error::NegativePrice)
    }
}

/// Units the cheapest repair must buy: the worst tail deficit of demand
/// against sorted supply, clamped at zero.
pub fn shortfall_units(p: &SupplyProfile, d: &DurationVector) -> Result<u64> {
    if p.horizon() != d.horizon() {
        return Err(Error::LengthMismatch {
            left: p.horizon(),
            right: d.horizon(),
        });
    }
    let sorted = p.sorted_desc();
    let mut worst = 0i64;
    let mut deficit = 0i64;
    for t in (0..sorted.len()).rev() {
        deficit += i64::from(d.counts()[t]) - i64::from(sorted[t]);
        worst = worst.max(deficit);
    }
    Ok(worst as u64)
}

/// Cheapest possible supplement cost `c · shortfall`. Zero iff `p` is adequate.
pub fn optimal_supplement_cost(
    p: &SupplyProfile,
    d: &DurationVector,
    c: Rational,
) -> Result<Rational> {
    check_price(c)?;
    Ok(c * rat(shortfall_units(p, d)? as i64))
}

/// A concrete minimal plan under full information. Units are placed one at a
/// time on a slot currently holding the least total power, tie-broken toward
/// the latest slot: every such unit shrinks the worst tail deficit by exactly
/// one, so the plan meets the closed-form optimum.
pub fn oracle_purchase(p: &SupplyProfile, d: &DurationVector, c: Rational) -> Result<PurchasePlan> {
    check_price(c)?;
    let units = shortfall_units(p, d)?;
    let mut combined = p.slots().to_vec();
    let mut purchases = vec![0u32; p.horizon()];
    for _ in 0..units {
        let mut best = 0;
        for t in 0..combined.len() {
            if combined[t] <= combined[best] {
                best = t;
            }
        }
        purchases[best] += 1;
        combined[best] += 1;
    }
    debug_assert_eq!(
        crate::majorization::weakly_majorizes(d.counts(), &combined),
        Ok(true)
    );
    Ok(PurchasePlan::new(purchases, c))
}

/// Slot-by-slot procurement: when slot `t`'s base supply is revealed, buy the
/// least `a_t` keeping the acquired totals able to cover the `t+1` deepest
/// demand entries. The binding constraints pair slot `t` with the `k` cheapest
/// previously acquired slots for each `k`, so the minimum is a max over sorted
/// prefix sums. Returns the plan plus the final LLF schedule of `p + a`.
pub fn runtime_purchase(
    d: &DurationVector,
    stream: &SupplyProfile,
    c: Rational,
) -> Result<(PurchasePlan, Allocation)> {
    check_price(c)?;
    let horizon = d.horizon();
    if stream.horizon() != horizon {
        return Err(Error::LengthMismatch {
            left: stream.horizon(),
            right: horizon,
        });
    }
    // dtail[j] = total of the j deepest demand entries.
    let mut dtail = vec![0i64; horizon + 1];
    for j in 1..=horizon {
        dtail[j] = dtail[j - 1] + i64::from(d.counts()[horizon - j]);
    }

    let mut acquired: Vec<u32> = Vec::with_capacity(horizon); // kept ascending
    let mut purchases = vec![0u32; horizon];
    for (t, &p_t) in stream.slots().iter().enumerate() {
        let mut need = 0i64;
        let mut prefix = 0i64;
        for k in 0..=t {
            need = need.max(dtail[k + 1] - i64::from(p_t) - prefix);
            if k < acquired.len() {
                prefix += i64::from(acquired[k]);
            }
        }
        purchases[t] = need as u32;
        let total = p_t + purchases[t];
        let at = acquired.partition_point(|&v| v < total);
        acquired.insert(at, total);
    }

    let combined = stream.plus(&SupplyProfile::new(purchases.clone()))?;
    let alloc = llf_allocate(&combined, &d.demand_profile())?;
    Ok((PurchasePlan::new(purchases, c), alloc))
}
