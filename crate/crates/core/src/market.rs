//! Forward market for duration-differentiated service: welfare accounting,
//! the welfare-optimal assignment of durations to a homogeneous population,
//! and duration-priced competitive equilibria that support it.
//!
//! Consumers share a utility `U(h)` for being served `h` slots (any `h` slots
//! — they are indifferent to timing). Whether the increments
//! `δ_h = U(h) − U(h−1)` rise or fall completely changes the shape of the
//! optimum: rising increments concentrate service on a few long durations
//! that track the sorted supply curve, falling increments spread service
//! across as many consumers as possible. Both shapes are governed by a single
//! threshold index `k*` comparing increments against the day-ahead price.

mod spot;

pub use spot::{SpotStep, SpotTrace, efficiency_gap, spot_price, spot_simulate};

use std::cmp::min;

use crate::demand::{DemandProfile, DurationVector, SupplyProfile};
use crate::error::{Error, Result};
use crate::majorization::first_tail_violation;
use crate::procurement::{oracle_purchase, shortfall_units};
use crate::rational::{Rational, is_nonnegative, rat};

/// Shape of the utility increments δ_h = U(h) − U(h−1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curvature {
    /// δ non-decreasing: later hours of service are worth more.
    ConvexIncrements,
    /// δ non-increasing: the first hours of service are worth the most.
    ConcaveIncrements,
}

/// Tabulated utility U(0..=T) with U(0) = 0 and non-negative increments
/// matching the declared curvature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilitySpec {
    values: Vec<Rational>,
    curvature: Curvature,
}

impl UtilitySpec {
    pub fn new(values: Vec<Rational>, curvature: Curvature) -> Result<Self> {
        if values.len() < 2 || values[0] != rat(0) {
            return Err(Error::BadUtilityTable);
        }
        for h in 1..values.len() {
            if values[h] < values[h - 1] {
                return Err(Error::NegativeUtilityIncrement { index: h });
            }
        }
        for h in 2..values.len() {
            let rising = values[h] - values[h - 1] >= values[h - 1] - values[h - 2];
            let consistent = match curvature {
                Curvature::ConvexIncrements => rising,
                Curvature::ConcaveIncrements => {
                    values[h] - values[h - 1] <= values[h - 1] - values[h - 2]
                }
            };
            if !consistent {
                return Err(Error::CurvatureMismatch { index: h });
            }
        }
        Ok(Self { values, curvature })
    }

    /// Longest duration the table covers.
    pub fn horizon(&self) -> usize {
        self.values.len() - 1
    }

    /// U(h). Panics if `h` exceeds the table.
    pub fn value(&self, h: usize) -> Rational {
        self.values[h]
    }

    /// δ_h = U(h) − U(h−1) for 1 ≤ h ≤ T.
    pub fn increment(&self, h: usize) -> Rational {
        self.values[h] - self.values[h - 1]
    }

    pub fn curvature(&self) -> Curvature {
        self.curvature
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

/// Posted price π(h) for each service duration h = 1..=T; π(0) is zero by
/// convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriceMenu {
    pi: Vec<Rational>,
}

impl PriceMenu {
    pub fn new(pi: Vec<Rational>) -> Result<Self> {
        if pi.iter().any(|p| !is_nonnegative(*p)) {
            return Err(Error::NegativePrice);
        }
        Ok(Self { pi })
    }

    pub fn horizon(&self) -> usize {
        self.pi.len()
    }

    pub fn price(&self, h: usize) -> Rational {
        if h == 0 { rat(0) } else { self.pi[h - 1] }
    }

    pub fn values(&self) -> &[Rational] {
        &self.pi
    }
}

/// Net social value of serving `h` alongside day-ahead purchases `y`:
/// `Σ_i U(h_i) − c_da·Σ_t y_t`. Errors if `r + y` cannot actually serve `h`.
pub fn welfare(
    h: &DemandProfile,
    y: &SupplyProfile,
    r: &SupplyProfile,
    u: &UtilitySpec,
    c_da: Rational,
) -> Result<Rational> {
    if y.horizon() != h.horizon() || r.horizon() != h.horizon() || u.horizon() != h.horizon() {
        return Err(Error::LengthMismatch {
            left: y.horizon(),
            right: h.horizon(),
        });
    }
    if !is_nonnegative(c_da) {
        return Err(Error::NegativePrice);
    }
    let d = h.duration_vector();
    let combined = r.plus(y)?;
    if let Some(tail) = first_tail_violation(d.counts(), combined.slots())? {
        return Err(Error::Inadequate { tail });
    }
    let gross = h
        .durations()
        .iter()
        .fold(rat(0), |acc, &dur| acc + u.value(dur as usize));
    Ok(gross - c_da * rat(y.total() as i64))
}

/// Welfare-optimal service plan for `population` identical consumers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WelfareOptimum {
    pub demand: DurationVector,
    pub purchase: Vec<u32>,
    pub welfare: Rational,
    /// The threshold index k* that shaped the optimum (see module docs).
    pub threshold: usize,
}

fn convex_threshold(u: &UtilitySpec, c_da: Rational) -> usize {
    let t = u.horizon();
    // Smallest k whose average increment over (k, T] covers the price;
    // defaults to T when even the last increment falls short.
    (0..t)
        .find(|&k| u.value(t) - u.value(k) >= c_da * rat((t - k) as i64))
        .unwrap_or(t)
}

fn concave_threshold(u: &UtilitySpec, c_da: Rational) -> usize {
    // Largest duration whose marginal value still covers the price.
    (1..=u.horizon())
        .rev()
        .find(|&k| u.increment(k) >= c_da)
        .unwrap_or(0)
}

fn optimal_duration_counts(
    rs: &[u32],
    population: u32,
    u: &UtilitySpec,
    c_da: Rational,
) -> Result<(Vec<u32>, usize)> {
    let horizon = rs.len();
    match u.curvature() {
        Curvature::ConvexIncrements => {
            let k = convex_threshold(u, c_da);
            if k == 0 {
                // Every extra slot of service pays for itself: serve the whole
                // population for the whole horizon.
                return Ok((vec![population; horizon], 0));
            }
            if rs[0] > population {
                return Err(Error::PopulationTooSmall {
                    population,
                    required: rs[0],
                });
            }
            // Track the sorted supply down to index k−1, then hold flat: the
            // flat tail turns the k−1st supply level into full-horizon
            // service paid for at the day-ahead price.
            Ok(((0..horizon).map(|i| rs[min(i, k - 1)]).collect(), k))
        }
        Curvature::ConcaveIncrements => {
            let k = concave_threshold(u, c_da);
            if k == 0 {
                // No duration is worth buying for; hand the free energy out
                // one slot per consumer.
                let total = rs.iter().map(|&v| u64::from(v)).sum::<u64>();
                if total > u64::from(population) {
                    return Err(Error::PopulationTooSmall {
                        population,
                        required: u32::try_from(total).unwrap_or(u32::MAX),
                    });
                }
                let mut d = vec![0u32; horizon];
                if horizon > 0 {
                    d[0] = total as u32;
                }
                return Ok((d, 0));
            }
            // Serve everyone for exactly k slots.
            let mut d = vec![0u32; horizon];
            for slot in d.iter_mut().take(k) {
                *slot = population;
            }
            Ok((d, k))
        }
    }
}

/// Maximize `Σ U(h_i) − c_da·Σy` over duration assignments and purchases.
///
/// Supply is sorted internally; the returned purchase vector aligns with the
/// given (chronological) order of `r`.
pub fn social_welfare_optimum(
    r: &SupplyProfile,
    population: u32,
    u: &UtilitySpec,
    c_da: Rational,
) -> Result<WelfareOptimum> {
    if u.horizon() != r.horizon() {
        return Err(Error::LengthMismatch {
            left: u.horizon(),
            right: r.horizon(),
        });
    }
    if !is_nonnegative(c_da) {
        return Err(Error::NegativePrice);
    }
    let rs = r.sorted_desc();
    let (counts, threshold) = optimal_duration_counts(&rs, population, u, c_da)?;
    let demand = DurationVector::new(counts, population)?;
    let plan = oracle_purchase(r, &demand, c_da)?;
    let value = welfare(
        &demand.demand_profile(),
        &SupplyProfile::new(plan.purchases.clone()),
        r,
        u,
        c_da,
    )?;
    Ok(WelfareOptimum {
        demand,
        purchase: plan.purchases,
        welfare: value,
        threshold,
    })
}

/// A complete forward-market outcome: posted prices, the supplier's service
/// bundle, the consumption it clears against, and the day-ahead purchases
/// backing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumOutcome {
    pub prices: PriceMenu,
    /// production[t] = number of duration-(t+1) services sold.
    pub production: Vec<u32>,
    pub demand: DemandProfile,
    pub dayahead_purchase: Vec<u32>,
    pub threshold: usize,
}

/// Construct the price menu and bundle that support the welfare optimum as a
/// competitive equilibrium: duration prices equal to `U(h)` when increments
/// rise (every consumer nets exactly zero surplus), linear prices
/// `min(c_da, U(1))·h` when they fall.
pub fn equilibrium(
    r: &SupplyProfile,
    population: u32,
    u: &UtilitySpec,
    c_da: Rational,
) -> Result<EquilibriumOutcome> {
    let optimum = social_welfare_optimum(r, population, u, c_da)?;
    let horizon = r.horizon();
    let pi = match u.curvature() {
        Curvature::ConvexIncrements => (1..=horizon).map(|h| u.value(h)).collect(),
        Curvature::ConcaveIncrements => {
            let unit = min(c_da, u.value(1));
            (1..=horizon).map(|h| unit * rat(h as i64)).collect()
        }
    };
    let counts = optimum.demand.counts();
    let mut production = vec![0u32; horizon];
    for t in 0..horizon {
        let next = if t + 1 < horizon { counts[t + 1] } else { 0 };
        production[t] = counts[t] - next;
    }
    Ok(EquilibriumOutcome {
        prices: PriceMenu::new(pi)?,
        production,
        demand: optimum.demand.demand_profile(),
        dayahead_purchase: optimum.purchase,
        threshold: optimum.threshold,
    })
}

fn bundle_profit(
    counts: &[u32],
    population: u32,
    prices: &PriceMenu,
    r: &SupplyProfile,
    c_da: Rational,
) -> Option<Rational> {
    let demand = DurationVector::new(counts.to_vec(), population).ok()?;
    let revenue = counts.iter().enumerate().fold(rat(0), |acc, (i, &d_t)| {
        acc + rat(i64::from(d_t)) * (prices.price(i + 1) - prices.price(i))
    });
    let units = shortfall_units(r, &demand).ok()?;
    Some(revenue - c_da * rat(units as i64))
}

fn visit_nonincreasing(
    buf: &mut Vec<u32>,
    horizon: usize,
    cap: u32,
    visit: &mut dyn FnMut(&[u32]),
) {
    if buf.len() == horizon {
        visit(buf);
        return;
    }
    for v in 0..=cap {
        buf.push(v);
        visit_nonincreasing(buf, horizon, v, visit);
        buf.pop();
    }
}

/// Check the three equilibrium conditions on an outcome:
///
/// 1. every chosen duration maximizes the consumer's surplus `U(h) − π(h)`
///    over all durations (including opting out, with π(0) = 0);
/// 2. the sold bundle maximizes supplier profit over every bundle the
///    population could absorb — exhaustively at small scale (T ≤ 6, N ≤ 20),
///    and by single-service perturbations otherwise;
/// 3. production matches consumption duration-for-duration.
pub fn verify_equilibrium(
    out: &EquilibriumOutcome,
    r: &SupplyProfile,
    u: &UtilitySpec,
    c_da: Rational,
) -> bool {
    let horizon = r.horizon();
    if u.horizon() != horizon
        || out.prices.horizon() != horizon
        || out.demand.horizon() != horizon
        || out.production.len() != horizon
        || out.dayahead_purchase.len() != horizon
    {
        return false;
    }
    let population = out.demand.load_count() as u32;

    // (1) Consumer surplus maximization.
    let best_surplus = (0..=horizon)
        .map(|h| u.value(h) - out.prices.price(h))
        .max()
        .unwrap_or_else(|| rat(0));
    for &h in out.demand.durations() {
        if u.value(h as usize) - out.prices.price(h as usize) != best_surplus {
            return false;
        }
    }

    // (3) Market clearing.
    for t in 1..=horizon {
        let chosen = out
            .demand
            .durations()
            .iter()
            .filter(|&&h| h as usize == t)
            .count();
        if out.production[t - 1] as usize != chosen {
            return false;
        }
    }

    // (2) Profit maximization, plus consistency of the backing purchases.
    let mut own_counts = vec![0u32; horizon];
    let mut suffix = 0u32;
    for t in (0..horizon).rev() {
        suffix += out.production[t];
        own_counts[t] = suffix;
    }
    let bought = SupplyProfile::new(out.dayahead_purchase.clone());
    let combined = match r.plus(&bought) {
        Ok(c) => c,
        Err(_) => return false,
    };
    match crate::majorization::weakly_majorizes(&own_counts, combined.slots()) {
        Ok(true) => {}
        _ => return false,
    }
    let revenue = own_counts
        .iter()
        .enumerate()
        .fold(rat(0), |acc, (i, &d_t)| {
            acc + rat(i64::from(d_t)) * (out.prices.price(i + 1) - out.prices.price(i))
        });
    let own_profit = revenue - c_da * rat(bought.total() as i64);

    if horizon <= 6 && population <= 20 {
        let mut beaten = false;
        let mut buf = Vec::with_capacity(horizon);
        visit_nonincreasing(&mut buf, horizon, population, &mut |candidate| {
            if let Some(profit) = bundle_profit(candidate, population, &out.prices, r, c_da)
                && profit > own_profit
            {
                beaten = true;
            }
        });
        if beaten {
            return false;
        }
    }
    // Single-service deviations: sell one more or one fewer service of each
    // duration (additions only while the population can absorb them).
    for t in 0..horizon {
        let mut counts = own_counts.clone();
        if counts.iter().take(t + 1).all(|&v| v < population) {
            for slot in counts.iter_mut().take(t + 1) {
                *slot += 1;
            }
            if let Some(profit) = bundle_profit(&counts, population, &out.prices, r, c_da)
                && profit > own_profit
            {
                return false;
            }
        }
        let mut counts = own_counts.clone();
        if out.production[t] > 0 {
            for slot in counts.iter_mut().take(t + 1) {
                *slot -= 1;
            }
            if let Some(profit) = bundle_profit(&counts, population, &out.prices, r, c_da)
                && profit > own_profit
            {
                return false;
            }
        }
    }
    true
}
