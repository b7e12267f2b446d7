//! Loads, supply, and the demand-profile ↔ duration-vector bijection.
//!
//! A load is a duration `h_i ∈ [0, T]`: it needs 1 kW in any `h_i` of the
//! `T` slots, and only the count matters. The aggregate shape that every
//! adequacy and market computation consumes is the *duration vector*
//! `d_t = #{i : h_i ≥ t+1}` — how many loads still need at least `t+1`
//! slots — which is non-increasing and determines the profile up to load
//! ordering.

use crate::error::{Error, Result};

/// Per-load required durations `h`, each within the horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandProfile {
    durations: Vec<u32>,
    horizon: usize,
}

impl DemandProfile {
    pub fn new(durations: Vec<u32>, horizon: usize) -> Result<Self> {
        if let Some(&d) = durations.iter().find(|&&d| d as usize > horizon) {
            return Err(Error::DurationExceedsHorizon {
                duration: d,
                horizon,
            });
        }
        Ok(Self { durations, horizon })
    }

    pub fn durations(&self) -> &[u32] {
        &self.durations
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Number of loads, including zero-duration ones.
    pub fn load_count(&self) -> usize {
        self.durations.len()
    }

    pub fn total_energy(&self) -> u64 {
        self.durations.iter().map(|&h| u64::from(h)).sum()
    }

    /// Counts loads still unfinished at each depth: `d_t = #{i : h_i ≥ t+1}`.
    pub fn duration_vector(&self) -> DurationVector {
        let mut counts = vec![0u32; self.horizon];
        for &h in &self.durations {
            for slot in counts.iter_mut().take(h as usize) {
                *slot += 1;
            }
        }
        DurationVector {
            counts,
            population: self.durations.len() as u32,
        }
    }
}

/// Non-increasing counts `d` plus the population `N ≥ d_0` they came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DurationVector {
    counts: Vec<u32>,
    population: u32,
}

impl DurationVector {
    pub fn new(counts: Vec<u32>, population: u32) -> Result<Self> {
        if let Some(i) = (1..counts.len()).find(|&i| counts[i] > counts[i - 1]) {
            return Err(Error::NotNonIncreasing { position: i });
        }
        let first = counts.first().copied().unwrap_or(0);
        if first > population {
            return Err(Error::PopulationTooSmall {
                population,
                required: first,
            });
        }
        Ok(Self { counts, population })
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn population(&self) -> u32 {
        self.population
    }

    pub fn horizon(&self) -> usize {
        self.counts.len()
    }

    pub fn total_energy(&self) -> u64 {
        self.counts.iter().map(|&d| u64::from(d)).sum()
    }

    /// Inverse of [`DemandProfile::duration_vector`]: emits `d_t − d_{t+1}`
    /// loads of duration `t+1` (0-based t), longest first, padded with
    /// `N − d_0` zero-duration loads so the population round-trips.
    pub fn demand_profile(&self) -> DemandProfile {
        let t_max = self.counts.len();
        let mut durations = Vec::with_capacity(self.population as usize);
        for t in (0..t_max).rev() {
            let deeper = if t + 1 < t_max { self.counts[t + 1] } else { 0 };
            for _ in 0..(self.counts[t] - deeper) {
                durations.push(t as u32 + 1);
            }
        }
        let served = self.counts.first().copied().unwrap_or(0);
        durations.extend(std::iter::repeat_n(0, (self.population - served) as usize));
        DemandProfile {
            durations,
            horizon: t_max,
        }
    }
}

/// Integer kW per slot, in chronological order. Also used for renewable
/// realizations and purchase vectors; adequacy only ever sees its sorted
/// shape, but procurement and spot simulation keep slot identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupplyProfile {
    slots: Vec<u32>,
}

impl SupplyProfile {
    pub fn new(slots: Vec<u32>) -> Self {
        Self { slots }
    }

    pub fn slots(&self) -> &[u32] {
        &self.slots
    }

    pub fn horizon(&self) -> usize {
        self.slots.len()
    }

    pub fn total(&self) -> u64 {
        self.slots.iter().map(|&p| u64::from(p)).sum()
    }

    pub fn sorted_desc(&self) -> Vec<u32> {
        crate::majorization::sort_desc(&self.slots)
    }

    /// Slot-wise sum with another profile of the same horizon.
    pub fn plus(&self, other: &SupplyProfile) -> Result<SupplyProfile> {
        if self.horizon() != other.horizon() {
            return Err(Error::LengthMismatch {
                left: self.horizon(),
                right: other.horizon(),
            });
        }
        Ok(SupplyProfile::new(
            self.slots
                .iter()
                .zip(&other.slots)
                .map(|(&a, &b)| a + b)
                .collect(),
        ))
    }
}
