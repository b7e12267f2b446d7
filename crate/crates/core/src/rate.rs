//! Rate-constrained energy services and their reduction to unit-rate loads.
//!
//! A consumer asking for `energy` kW-slots at rate at most `max_rate` is
//! interchangeable with `max_rate` unit-rate loads whose durations split the
//! energy as evenly as possible: writing `energy = k·max_rate + rem`
//! (`rem < max_rate`), that is `rem` loads of duration `k+1` and the rest of
//! duration `k`. Rate-feasible schedules and per-load schedules convert both
//! ways ([`compose_allocation`], [`split_allocation`]), so everything proved
//! for unit-rate loads carries over.

use std::cmp::Reverse;

use crate::demand::DemandProfile;
use crate::error::{Error, Result};

/// An energy request with a rate cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RateSpec {
    energy: u32,
    max_rate: u32,
    horizon: usize,
}

impl RateSpec {
    /// Requires `energy ≤ max_rate · horizon`; in particular a zero rate
    /// admits only zero energy.
    pub fn new(energy: u32, max_rate: u32, horizon: usize) -> Result<Self> {
        let capacity = u64::from(max_rate) * horizon as u64;
        if u64::from(energy) > capacity {
            return Err(Error::EnergyExceedsCapacity { energy, capacity });
        }
        Ok(Self {
            energy,
            max_rate,
            horizon,
        })
    }

    pub fn energy(&self) -> u32 {
        self.energy
    }

    pub fn max_rate(&self) -> u32 {
        self.max_rate
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Duration of unit load `n` (0-based) in the even split, longest first.
    fn target_duration(&self, n: u32) -> u32 {
        let k = self.energy / self.max_rate;
        let rem = self.energy % self.max_rate;
        if n < rem { k + 1 } else { k }
    }
}

/// The equivalent population of unit-rate loads, longest first.
pub fn decompose(spec: &RateSpec) -> DemandProfile {
    let durations: Vec<u32> = (0..spec.max_rate)
        .map(|n| spec.target_duration(n))
        .collect();
    DemandProfile::new(durations, spec.horizon)
        .expect("even split keeps every duration within the horizon")
}

/// Sum binary unit-load rows back into a rate-constrained schedule.
///
/// Rows must be one per unit load, with row sums matching the decomposition's
/// durations (order-insensitively).
pub fn compose_allocation(unit_rows: &[Vec<u8>], spec: &RateSpec) -> Result<Vec<u32>> {
    if unit_rows.len() != spec.max_rate as usize {
        return Err(Error::RowCountMismatch {
            expected: spec.max_rate as usize,
            got: unit_rows.len(),
        });
    }
    let mut sums = Vec::with_capacity(unit_rows.len());
    for (n, row) in unit_rows.iter().enumerate() {
        if row.len() != spec.horizon {
            return Err(Error::LengthMismatch {
                left: row.len(),
                right: spec.horizon,
            });
        }
        if let Some(slot) = row.iter().position(|&b| b > 1) {
            return Err(Error::NonBinaryEntry { row: n, slot });
        }
        sums.push(row.iter().map(|&b| u32::from(b)).sum::<u32>());
    }
    sums.sort_unstable_by_key(|&s| Reverse(s));
    for (n, &got) in sums.iter().enumerate() {
        let expected = spec.target_duration(n as u32);
        if got != expected {
            return Err(Error::RowSumMismatch {
                row: n,
                expected,
                got,
            });
        }
    }
    let mut total = vec![0u32; spec.horizon];
    for row in unit_rows {
        for (t, &b) in row.iter().enumerate() {
            total[t] += u32::from(b);
        }
    }
    Ok(total)
}

/// Split a rate-feasible schedule into binary unit-load rows, longest first.
///
/// Each row peels its duration's worth of slots off wherever the remaining
/// schedule is largest (earliest slot on ties). Peeling the largest slots
/// first keeps every remaining value under the shrinking row count, so the
/// peel always completes on a schedule satisfying the rate and energy
/// constraints.
pub fn split_allocation(schedule: &[u32], spec: &RateSpec) -> Result<Vec<Vec<u8>>> {
    if schedule.len() != spec.horizon {
        return Err(Error::LengthMismatch {
            left: schedule.len(),
            right: spec.horizon,
        });
    }
    for (slot, &value) in schedule.iter().enumerate() {
        if value > spec.max_rate {
            return Err(Error::RateExceeded {
                slot,
                value,
                max_rate: spec.max_rate,
            });
        }
    }
    let total: u32 = schedule.iter().sum();
    if total != spec.energy {
        return Err(Error::EnergyMismatch {
            expected: spec.energy,
            got: total,
        });
    }

    let mut remaining = schedule.to_vec();
    let mut rows = Vec::with_capacity(spec.max_rate as usize);
    let mut order: Vec<usize> = (0..spec.horizon).collect();
    for n in 0..spec.max_rate {
        let target = spec.target_duration(n) as usize;
        order.sort_by_key(|&t| (Reverse(remaining[t]), t));
        let mut row = vec![0u8; spec.horizon];
        for &t in order.iter().take(target) {
            debug_assert!(remaining[t] > 0, "peel target exceeds live slots");
            remaining[t] -= 1;
            row[t] = 1;
        }
        rows.push(row);
    }
    debug_assert!(remaining.iter().all(|&v| v == 0));
    Ok(rows)
}
