use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by invalid inputs. Model violations are never errors; they
/// are reported as data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector norm {norm} deviates from 1 by more than 1e-12")]
    NotUnit { norm: f64 },
    #[error("the zero vector has no direction")]
    ZeroVector,
    #[error("probability {0} lies outside [0, 1]")]
    Probability(f64),
    #[error("angle grid is empty")]
    EmptyGrid,
    #[error("angle step must be positive, got {0}")]
    AngleStep(f64),
    #[error("direction list is empty")]
    EmptyDirections,
    #[error("the christian model requires an update rule")]
    MissingUpdateRule,
    #[error("{model} needs at least {min} samples, got {got}")]
    TooFewSamples {
        model: &'static str,
        min: u64,
        got: u64,
    },
    #[error("grid step {0} lies outside (0, 0.1]")]
    GridStep(f64),
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("operand dimensions {0} and {1} exceed the 8-dimensional limit")]
    Dimension(usize, usize),
    #[error("{directions} directions but {outcomes} outcomes")]
    LengthMismatch { directions: usize, outcomes: usize },
    #[error("sequential measurement needs a single-particle state, got dimension {0}")]
    NotSingleParticle(usize),
    #[error("invalid particle pair ({0}, {1})")]
    InvalidPair(usize, usize),
    #[error("cannot parse multivector from {0:?}")]
    ParseMultivector(String),
}
