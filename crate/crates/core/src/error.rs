use thiserror::Error;

/// Crate-wide error type. Variants carry enough context to report the
/// offending quantity without holding references into caller data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vector lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("index {index} out of range for vector of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("transfer needs v[{from}] > v[{to}]")]
    TransferNotDecreasing { from: usize, to: usize },

    #[error("source vector is not majorized below the target")]
    NotMajorized,

    #[error("counts must be non-increasing (violated at position {position})")]
    NotNonIncreasing { position: usize },

    #[error("load duration {duration} exceeds horizon {horizon}")]
    DurationExceedsHorizon { duration: u32, horizon: usize },

    #[error("population {population} too small: needs at least {required}")]
    PopulationTooSmall { population: u32, required: u32 },

    /// Supply cannot cover demand. `tail` is the 0-based start of the first
    /// sorted tail (scanning t = 0..T, whole vector first) whose demand sum
    /// exceeds the matching supply sum.
    #[error("supply inadequate for demand (first violated tail starts at sorted index {tail})")]
    Inadequate { tail: usize },

    #[error("load {load} has negative laxity at slot {slot}; supply cannot finish it")]
    NegativeLaxity { load: usize, slot: usize },

    #[error("price must be non-negative")]
    NegativePrice,

    #[error("scenario distribution is empty")]
    EmptyDistribution,

    #[error("scenario mass must be positive")]
    NonPositiveMass,

    #[error("scenario masses must sum to 1")]
    MassSumNotOne,

    #[error("utility table needs U(0) = 0 and at least one increment")]
    BadUtilityTable,

    #[error("utility increment {index} is negative")]
    NegativeUtilityIncrement { index: usize },

    #[error("utility increments do not match the declared curvature (at increment {index})")]
    CurvatureMismatch { index: usize },

    #[error("state histogram sums to {got}, expected {expected} consumers")]
    HistogramMismatch { expected: u32, got: u32 },

    #[error("slot {slot} out of range for horizon {horizon}")]
    SlotOutOfRange { slot: usize, horizon: usize },

    #[error("rate spec needs energy {energy} ≤ max_rate·horizon = {capacity}")]
    EnergyExceedsCapacity { energy: u32, capacity: u64 },

    #[error("allocation energy {got} does not match spec energy {expected}")]
    EnergyMismatch { expected: u32, got: u32 },

    #[error("allocation value {value} at slot {slot} exceeds max rate {max_rate}")]
    RateExceeded {
        slot: usize,
        value: u32,
        max_rate: u32,
    },

    #[error("expected {expected} unit rows, got {got}")]
    RowCountMismatch { expected: usize, got: usize },

    #[error("unit row {row} has sum {got}, expected {expected}")]
    RowSumMismatch { row: usize, expected: u32, got: u32 },

    #[error("unit row {row} has a non-binary entry at slot {slot}")]
    NonBinaryEntry { row: usize, slot: usize },

    #[error("cannot parse {input:?} as a rational number")]
    ParseRational { input: String },
}

pub type Result<T> = std::result::Result<T, Error>;
