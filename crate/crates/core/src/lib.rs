//! Scheduling and market analysis for duration-differentiated electric loads.
//!
//! The model: a horizon of `T` slots, a population of flexible loads that
//! each need one unit of power for some number of complete (not necessarily
//! contiguous) slots, and a variable supply profile. Whether the supply can
//! serve everyone turns out to depend only on sorted tail sums
//! ([`majorization`]), which makes adequacy checkable in `O(T log T)`
//! ([`adequacy`]) and makes least-laxity-first scheduling exact. On top of
//! that sit procurement of supplemental power with and without foresight
//! ([`procurement`]), two-stage day-ahead commitment under supply uncertainty
//! ([`dayahead`]), welfare-optimal duration assignment with supporting
//! competitive prices and a myopic spot-market benchmark ([`market`]), and
//! the reduction of rate-constrained energy requests to unit-rate loads
//! ([`rate`]).
//!
//! Quantities are integers; prices, utilities, and welfare are exact
//! rationals ([`rational::Rational`]), so every comparison in the crate is
//! exact.

pub mod adequacy;
pub mod dayahead;
pub mod demand;
pub mod error;
pub mod majorization;
pub mod market;
pub mod procurement;
pub mod rate;
pub mod rational;

pub use error::{Error, Result};

/// Crate version, for embedding in generated reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
