//! Scenario file ingestion: a single JSON document describes the instance,
//! and each subcommand pulls out (and validates) only the fields it needs.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use flexload::dayahead::{ScenarioDistribution, TwoStagePrices};
use flexload::demand::{DemandProfile, SupplyProfile};
use flexload::market::{Curvature, UtilitySpec};
use flexload::rate::{RateSpec, decompose};
use flexload::rational::{Rational, parse_rational};

use crate::error::CliError;

/// One entry of `loads`: either a plain duration or a rate-constrained
/// energy request that expands into substitute unit-rate loads.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum LoadEntry {
    Duration(u32),
    Rate(RateEntry),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateEntry {
    pub energy: u32,
    pub max_rate: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioEntry {
    pub supply: Vec<u32>,
    pub probability: Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriceEntry {
    pub day_ahead: Option<Value>,
    pub real_time: Option<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UtilityEntry {
    pub values: Vec<Value>,
    pub curvature: String,
}

/// The parsed scenario document. Every field is optional at parse time;
/// accessors report which required field is missing for the subcommand at
/// hand.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub horizon: Option<usize>,
    pub loads: Option<Vec<LoadEntry>>,
    pub supply: Option<Vec<u32>>,
    pub scenarios: Option<Vec<ScenarioEntry>>,
    pub prices: Option<PriceEntry>,
    pub utility: Option<UtilityEntry>,
    pub consumers: Option<u32>,
    pub seed: Option<u64>,
    pub day_ahead_cap: Option<u32>,
}

fn missing(field: &str) -> CliError {
    CliError::validation(format!("scenario is missing required field `{field}`"))
}

/// Accept a JSON number (integer or short decimal) or a "p/q" string.
pub fn rational_field(value: &Value, what: &str) -> Result<Rational, CliError> {
    let text = match value {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => {
            return Err(CliError::validation(format!(
                "{what} must be a number or a \"p/q\" string, got {other}"
            )));
        }
    };
    parse_rational(&text)
        .map_err(|_| CliError::validation(format!("{what}: cannot parse `{text}` as a rational")))
}

impl ScenarioFile {
    /// Read and parse a scenario, returning it with the SHA-256 hex digest of
    /// the raw file bytes.
    pub fn load(path: &Path) -> Result<(Self, String), CliError> {
        let bytes = fs::read(path).map_err(|e| {
            CliError::validation(format!("cannot read scenario {}: {e}", path.display()))
        })?;
        let digest = format!("{:x}", Sha256::digest(&bytes));
        let scenario: Self = serde_json::from_slice(&bytes).map_err(|e| {
            CliError::validation(format!("scenario {} is not valid: {e}", path.display()))
        })?;
        Ok((scenario, digest))
    }

    pub fn horizon(&self) -> Result<usize, CliError> {
        self.horizon.ok_or_else(|| missing("horizon"))
    }

    pub fn supply(&self) -> Result<SupplyProfile, CliError> {
        let slots = self.supply.as_ref().ok_or_else(|| missing("supply"))?;
        let horizon = self.horizon()?;
        if slots.len() != horizon {
            return Err(CliError::validation(format!(
                "supply has {} slots but horizon is {horizon}",
                slots.len()
            )));
        }
        Ok(SupplyProfile::new(slots.clone()))
    }

    /// All load durations, with rate-constrained entries expanded into their
    /// substitute unit-rate loads.
    pub fn durations(&self) -> Result<Vec<u32>, CliError> {
        let entries = self.loads.as_ref().ok_or_else(|| missing("loads"))?;
        let horizon = self.horizon()?;
        let mut durations = Vec::new();
        for entry in entries {
            match entry {
                LoadEntry::Duration(h) => durations.push(*h),
                LoadEntry::Rate(rate) => {
                    let spec = RateSpec::new(rate.energy, rate.max_rate, horizon)?;
                    durations.extend_from_slice(decompose(&spec).durations());
                }
            }
        }
        Ok(durations)
    }

    pub fn demand_profile(&self) -> Result<DemandProfile, CliError> {
        Ok(DemandProfile::new(self.durations()?, self.horizon()?)?)
    }

    pub fn consumers(&self) -> Result<u32, CliError> {
        self.consumers.ok_or_else(|| missing("consumers"))
    }

    pub fn utility(&self) -> Result<UtilitySpec, CliError> {
        let entry = self.utility.as_ref().ok_or_else(|| missing("utility"))?;
        let horizon = self.horizon()?;
        if entry.values.len() != horizon + 1 {
            return Err(CliError::validation(format!(
                "utility.values must list U(0)..U({horizon}), got {} entries",
                entry.values.len()
            )));
        }
        let curvature = match entry.curvature.as_str() {
            "convex" => Curvature::ConvexIncrements,
            "concave" => Curvature::ConcaveIncrements,
            other => {
                return Err(CliError::validation(format!(
                    "utility.curvature must be \"convex\" or \"concave\", got \"{other}\""
                )));
            }
        };
        let values = entry
            .values
            .iter()
            .enumerate()
            .map(|(h, v)| rational_field(v, &format!("utility.values[{h}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(UtilitySpec::new(values, curvature)?)
    }

    fn prices(&self) -> Result<&PriceEntry, CliError> {
        self.prices.as_ref().ok_or_else(|| missing("prices"))
    }

    pub fn price_day_ahead(&self) -> Result<Rational, CliError> {
        let entry = self.prices()?;
        let value = entry
            .day_ahead
            .as_ref()
            .ok_or_else(|| missing("prices.day_ahead"))?;
        rational_field(value, "prices.day_ahead")
    }

    pub fn price_real_time(&self) -> Result<Rational, CliError> {
        let entry = self.prices()?;
        let value = entry
            .real_time
            .as_ref()
            .ok_or_else(|| missing("prices.real_time"))?;
        rational_field(value, "prices.real_time")
    }

    pub fn two_stage_prices(&self) -> Result<TwoStagePrices, CliError> {
        Ok(TwoStagePrices::new(
            self.price_day_ahead()?,
            self.price_real_time()?,
        )?)
    }

    pub fn distribution(&self) -> Result<ScenarioDistribution, CliError> {
        let entries = self
            .scenarios
            .as_ref()
            .ok_or_else(|| missing("scenarios"))?;
        let horizon = self.horizon()?;
        let mut scenarios = Vec::with_capacity(entries.len());
        for (i, entry) in entries.iter().enumerate() {
            if entry.supply.len() != horizon {
                return Err(CliError::validation(format!(
                    "scenarios[{i}].supply has {} slots but horizon is {horizon}",
                    entry.supply.len()
                )));
            }
            let mass = rational_field(&entry.probability, &format!("scenarios[{i}].probability"))?;
            scenarios.push((SupplyProfile::new(entry.supply.clone()), mass));
        }
        Ok(ScenarioDistribution::new(scenarios)?)
    }
}
