//! Two-stage procurement: commit day-ahead quantities `y` before the random
//! base supply is revealed, then cover any remaining shortfall at the
//! real-time price.
//!
//! The objective is `J(y) = c_da·Σy + c_rt·E[shortfall(r + y, d)]`, evaluated
//! exactly over a finite scenario distribution. `J` is convex in `y` (the
//! shortfall is a maximum of affine functions), which [`convexity_probe`]
//! spot-checks numerically on its real-valued relaxation.

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use crate::demand::{DurationVector, SupplyProfile};
use crate::error::{Error, Result};
use crate::procurement::shortfall_units;
use crate::rational::{Rational, is_nonnegative, rat};

/// Finite-support distribution over base supply profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioDistribution {
    scenarios: Vec<(SupplyProfile, Rational)>,
    horizon: usize,
}

impl ScenarioDistribution {
    /// Masses must be positive and sum to exactly one; all profiles must
    /// share a horizon.
    pub fn new(scenarios: Vec<(SupplyProfile, Rational)>) -> Result<Self> {
        let horizon = match scenarios.first() {
            Some((r, _)) => r.horizon(),
            None => return Err(Error::EmptyDistribution),
        };
        let mut total = rat(0);
        for (r, mass) in &scenarios {
            if r.horizon() != horizon {
                return Err(Error::LengthMismatch {
                    left: r.horizon(),
                    right: horizon,
                });
            }
            if *mass <= rat(0) {
                return Err(Error::NonPositiveMass);
            }
            total += *mass;
        }
        if total != rat(1) {
            return Err(Error::MassSumNotOne);
        }
        Ok(Self { scenarios, horizon })
    }

    pub fn scenarios(&self) -> &[(SupplyProfile, Rational)] {
        &self.scenarios
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }
}

/// Unit prices for the two stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoStagePrices {
    pub day_ahead: Rational,
    pub real_time: Rational,
}

impl TwoStagePrices {
    pub fn new(day_ahead: Rational, real_time: Rational) -> Result<Self> {
        if !is_nonnegative(day_ahead) || !is_nonnegative(real_time) {
            return Err(Error::NegativePrice);
        }
        Ok(Self {
            day_ahead,
            real_time,
        })
    }
}

/// Exact expected cost of committing `y` day-ahead.
pub fn expected_cost(
    y: &SupplyProfile,
    d: &DurationVector,
    dist: &ScenarioDistribution,
    prices: &TwoStagePrices,
) -> Result<Rational> {
    if y.horizon() != d.horizon() || dist.horizon() != d.horizon() {
        return Err(Error::LengthMismatch {
            left: y.horizon(),
            right: d.horizon(),
        });
    }
    let mut expected_shortfall = rat(0);
    for (r, mass) in dist.scenarios() {
        let combined = r.plus(y)?;
        expected_shortfall += *mass * rat(shortfall_units(&combined, d)? as i64);
    }
    Ok(prices.day_ahead * rat(y.total() as i64) + prices.real_time * expected_shortfall)
}

/// Result of the exhaustive day-ahead search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DayAheadSolution {
    pub purchase: Vec<u32>,
    pub cost: Rational,
    /// True when some coordinate of the minimizer sits on the search cap —
    /// a hint that the default box may be binding.
    pub cap_hit: bool,
}

/// Exhaustive integer minimization of the expected cost over `[0, cap]^T`.
///
/// The default cap is the peak demand `d_1`: committing more than that in any
/// slot can never reduce the shortfall term. Ties break toward the
/// lexicographically smallest vector.
pub fn minimize_dayahead(
    d: &DurationVector,
    dist: &ScenarioDistribution,
    prices: &TwoStagePrices,
    y_cap: Option<u32>,
) -> Result<DayAheadSolution> {
    if dist.horizon() != d.horizon() {
        return Err(Error::LengthMismatch {
            left: dist.horizon(),
            right: d.horizon(),
        });
    }
    let horizon = d.horizon();
    let cap = y_cap.unwrap_or_else(|| d.counts().first().copied().unwrap_or(0));

    let mut y = vec![0u32; horizon];
    let mut best = y.clone();
    let mut best_cost = expected_cost(&SupplyProfile::new(y.clone()), d, dist, prices)?;
    // Odometer enumeration visits candidates in lexicographic order, so the
    // first strict improvement is automatically the lexicographically
    // smallest minimizer.
    loop {
        let mut slot = horizon;
        while slot > 0 {
            slot -= 1;
            if y[slot] < cap {
                y[slot] += 1;
                for v in &mut y[slot + 1..] {
                    *v = 0;
                }
                break;
            }
            if slot == 0 {
                let cap_hit = best.contains(&cap);
                return Ok(DayAheadSolution {
                    purchase: best,
                    cost: best_cost,
                    cap_hit,
                });
            }
        }
        if horizon == 0 {
            return Ok(DayAheadSolution {
                purchase: best,
                cost: best_cost,
                cap_hit: false,
            });
        }
        let cost = expected_cost(&SupplyProfile::new(y.clone()), d, dist, prices)?;
        if cost < best_cost {
            best_cost = cost;
            best = y.clone();
        }
    }
}

fn to_f64(q: Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

fn real_shortfall(combined: &[f64], d: &DurationVector) -> f64 {
    let mut sorted = combined.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("supply values are finite"));
    let mut worst = 0.0f64;
    let mut deficit = 0.0f64;
    for t in (0..sorted.len()).rev() {
        deficit += f64::from(d.counts()[t]) - sorted[t];
        worst = worst.max(deficit);
    }
    worst
}

/// The same objective over real-valued commitments, for numeric exploration.
pub fn relaxed_cost(
    y: &[f64],
    d: &DurationVector,
    dist: &ScenarioDistribution,
    prices: &TwoStagePrices,
) -> Result<f64> {
    if y.len() != d.horizon() || dist.horizon() != d.horizon() {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: d.horizon(),
        });
    }
    let mut expected = 0.0f64;
    for (r, mass) in dist.scenarios() {
        let combined: Vec<f64> = r
            .slots()
            .iter()
            .zip(y)
            .map(|(&r_t, &y_t)| f64::from(r_t) + y_t)
            .collect();
        expected += to_f64(*mass) * real_shortfall(&combined, d);
    }
    Ok(to_f64(prices.day_ahead) * y.iter().sum::<f64>() + to_f64(prices.real_time) * expected)
}

/// Samples random segment triples and checks the convexity inequality
/// `J(λy₁ + (1−λ)y₂) ≤ λJ(y₁) + (1−λ)J(y₂)` to absolute tolerance 1e-9.
/// Returns false on the first violated triple.
pub fn convexity_probe(
    d: &DurationVector,
    dist: &ScenarioDistribution,
    prices: &TwoStagePrices,
    trials: u32,
    seed: u64,
) -> Result<bool> {
    let horizon = d.horizon();
    let cap = f64::from(d.counts().first().copied().unwrap_or(0)) + 1.0;
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..trials {
        let y1: Vec<f64> = (0..horizon).map(|_| rng.random_range(0.0..cap)).collect();
        let y2: Vec<f64> = (0..horizon).map(|_| rng.random_range(0.0..cap)).collect();
        let lambda: f64 = rng.random();
        let blend: Vec<f64> = y1
            .iter()
            .zip(&y2)
            .map(|(&a, &b)| lambda * a + (1.0 - lambda) * b)
            .collect();
        let left = relaxed_cost(&blend, d, dist, prices)?;
        let right = lambda * relaxed_cost(&y1, d, dist, prices)?
            + (1.0 - lambda) * relaxed_cost(&y2, d, dist, prices)?;
        if left > right + 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}
