use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension {n} is outside the supported range 0..={max}")]
    Dimension { n: usize, max: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("element {element} is not in [{n}]")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("coordinate {coord} is not in [{n}]")]
    CoordinateOutOfRange { coord: usize, n: usize },
    #[error("coordinates must be distinct, got {0} twice")]
    RepeatedCoordinate(usize),
    #[error("subset {0} listed twice")]
    DuplicateSubset(String),
    #[error("size {m} is outside 0..={max}")]
    SizeOutOfRange { m: u64, max: u64 },
    #[error("{0} is not a subset of {1}")]
    NotSubset(String, String),
    #[error("shift sets overlap: S = {s}, T = {t}")]
    OverlappingShift { s: String, t: String },
    #[error("invalid measure {value}: {reason}")]
    InvalidMeasure { value: String, reason: &'static str },
    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("family is not increasing")]
    NotIncreasing,
    #[error("family has measure {0} > 1/2")]
    MeasureTooLarge(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("parse error: {0}")]
    Parse(String),
}
