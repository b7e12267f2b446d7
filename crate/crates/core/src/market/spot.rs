//! Sequential spot market: one clearing per slot, myopic consumers.
//!
//! Entering slot t, consumer i already holds some number of earlier slots and
//! is willing to pay exactly the marginal value of one more. The supplier
//! offers the slot's free supply at any price and imports arbitrarily much at
//! the real-time price `c_rt`, so the clearing price is the willingness of
//! the first consumer who cannot be served from free supply, capped at
//! `c_rt`. Consumers who value the slot exactly at the price do buy; when the
//! price sits below `c_rt` the free supply is rationed toward the highest
//! willingness first.

use std::cmp::{Reverse, min};

use crate::demand::SupplyProfile;
use crate::error::{Error, Result};
use crate::market::{Curvature, UtilitySpec, social_welfare_optimum};
use crate::rational::{Rational, is_nonnegative, rat};

/// Clearing price for one slot.
///
/// `held[j]` counts consumers currently holding `j` slots (so the histogram
/// has `slot + 1` buckets at 0-based slot index `slot`). A consumer holding
/// `j` bids the increment δ_{j+1}; walking the buckets in descending-bid
/// order, the price is the bid of the bucket in which cumulative demand first
/// exceeds the free supply — capped at `c_rt`, and zero when free supply
/// covers the whole population.
pub fn spot_price(
    slot: usize,
    free_supply: u32,
    held: &[u32],
    consumers: u32,
    u: &UtilitySpec,
    c_rt: Rational,
) -> Result<Rational> {
    if slot >= u.horizon() {
        return Err(Error::SlotOutOfRange {
            slot,
            horizon: u.horizon(),
        });
    }
    if held.len() != slot + 1 {
        return Err(Error::LengthMismatch {
            left: held.len(),
            right: slot + 1,
        });
    }
    let total: u32 = held.iter().sum();
    if total != consumers {
        return Err(Error::HistogramMismatch {
            expected: consumers,
            got: total,
        });
    }
    if !is_nonnegative(c_rt) {
        return Err(Error::NegativePrice);
    }
    if consumers <= free_supply {
        return Ok(rat(0));
    }
    let order: Vec<usize> = match u.curvature() {
        Curvature::ConvexIncrements => (0..=slot).rev().collect(),
        Curvature::ConcaveIncrements => (0..=slot).collect(),
    };
    let mut cumulative = 0u32;
    for j in order {
        cumulative += held[j];
        if free_supply < cumulative {
            return Ok(min(c_rt, u.increment(j + 1)));
        }
    }
    unreachable!("cumulative demand reaches the population, which exceeds free supply");
}

/// One slot of the simulated market.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpotStep {
    pub price: Rational,
    /// Holdings histogram entering the slot.
    pub histogram: Vec<u32>,
    /// Consumers served this slot, ascending index.
    pub buyers: Vec<u32>,
    /// Units the supplier imported at `c_rt` to serve them.
    pub topup: u64,
}

/// Full trajectory of the slot-by-slot market.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpotTrace {
    pub steps: Vec<SpotStep>,
    pub final_holdings: Vec<u32>,
    pub utilities: Vec<Rational>,
    pub payments: Vec<Rational>,
    pub consumer_net: Rational,
    pub supplier_profit: Rational,
    pub welfare: Rational,
}

/// Run the market for every slot with `consumers` identical myopic consumers.
///
/// At the capped price the supplier imports for every willing consumer; below
/// the cap only free supply trades, highest willingness first (ties broken by
/// consumer index). Rationed consumers simply stay at their holdings.
pub fn spot_simulate(
    r: &SupplyProfile,
    consumers: u32,
    u: &UtilitySpec,
    c_rt: Rational,
) -> Result<SpotTrace> {
    if u.horizon() != r.horizon() {
        return Err(Error::LengthMismatch {
            left: u.horizon(),
            right: r.horizon(),
        });
    }
    if !is_nonnegative(c_rt) {
        return Err(Error::NegativePrice);
    }
    let n = consumers as usize;
    let mut holdings = vec![0u32; n];
    let mut payments = vec![rat(0); n];
    let mut steps = Vec::with_capacity(r.horizon());
    let mut imported = 0u64;

    for (slot, &free) in r.slots().iter().enumerate() {
        let mut histogram = vec![0u32; slot + 1];
        for &h in &holdings {
            histogram[h as usize] += 1;
        }
        let price = spot_price(slot, free, &histogram, consumers, u, c_rt)?;

        let mut willing: Vec<u32> = (0..n as u32)
            .filter(|&i| u.increment(holdings[i as usize] as usize + 1) >= price)
            .collect();
        let buyers: Vec<u32>;
        let topup: u64;
        if price == c_rt {
            // The supplier imports whatever free supply cannot cover.
            topup = (willing.len() as u64).saturating_sub(u64::from(free));
            buyers = willing;
        } else {
            willing.sort_by_key(|&i| (Reverse(u.increment(holdings[i as usize] as usize + 1)), i));
            willing.truncate(free as usize);
            willing.sort_unstable();
            topup = 0;
            buyers = willing;
        }
        for &i in &buyers {
            holdings[i as usize] += 1;
            payments[i as usize] += price;
        }
        imported += topup;
        steps.push(SpotStep {
            price,
            histogram,
            buyers,
            topup,
        });
    }

    let utilities: Vec<Rational> = holdings.iter().map(|&h| u.value(h as usize)).collect();
    let gross = utilities.iter().fold(rat(0), |acc, &v| acc + v);
    let revenue = payments.iter().fold(rat(0), |acc, &v| acc + v);
    let import_cost = c_rt * rat(imported as i64);
    Ok(SpotTrace {
        steps,
        final_holdings: holdings,
        utilities,
        payments,
        consumer_net: gross - revenue,
        supplier_profit: revenue - import_cost,
        welfare: gross - import_cost,
    })
}

/// Welfare of the forward optimum versus the myopic spot market at a common
/// price `c` for both stages. Returns `(forward, spot, forward − spot)`.
pub fn efficiency_gap(
    r: &SupplyProfile,
    consumers: u32,
    u: &UtilitySpec,
    c: Rational,
) -> Result<(Rational, Rational, Rational)> {
    let forward = social_welfare_optimum(r, consumers, u, c)?.welfare;
    let spot = spot_simulate(r, consumers, u, c)?.welfare;
    Ok((forward, spot, forward - spot))
}
