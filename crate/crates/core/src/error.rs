use alloc::string::String;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Which resource ceiling stopped the exact engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    Primes,
    Implicants,
    Nodes,
}

impl core::fmt::Display for Limit {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Limit::Primes => "prime count",
            Limit::Implicants => "implicant expansion",
            Limit::Nodes => "branch-and-bound node",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("width must be positive")]
    ZeroWidth,
    #[error("invalid cube text {0:?}")]
    InvalidCube(String),
    #[error("invalid bit pattern {0:?}")]
    InvalidBits(String),

    #[error("minterm {0} is in both the on-set and the off-set")]
    OnOffOverlap(String),
    #[error("on-set item {0} is not covered")]
    Uncovered(String),
    #[error("cube {cube} intersects off-set minterm {minterm}")]
    CubeIntersectsOff { cube: String, minterm: String },
    #[error("exact minimization exceeded the {limit} ceiling ({ceiling}); use the heuristic engine instead")]
    ExactIntractable { limit: Limit, ceiling: usize },

    #[error("table has no rows")]
    EmptyTable,
    #[error("label column {0:?} not found")]
    UnknownLabelColumn(String),
    #[error("row {row}: label value {value:?} is not 0 or 1")]
    NonBinaryLabel { row: usize, value: String },
    #[error("column {0:?} not found")]
    MissingColumn(String),
    #[error("duplicate feature name {0:?}")]
    DuplicateFeature(String),
    #[error("feature {0:?} has no observed values")]
    EmptyFeature(String),
    #[error("row {row}: expected {expected} fields, found {found}")]
    RowLength { row: usize, expected: usize, found: usize },
    #[error("missing value in column {column:?}")]
    MissingValue { column: String },
    #[error("feature {feature:?}: unseen category {value:?}")]
    UnseenCategory { feature: String, value: String },
    #[error("feature {feature:?}: {value:?} is not a number")]
    NotNumeric { feature: String, value: String },
    #[error("level {level} does not fit in {width} bits")]
    LevelOutOfRange { level: u64, width: usize },
    #[error("index {index} out of range for cardinality {cardinality}")]
    IndexOutOfRange { index: usize, cardinality: usize },
    #[error("bit position {position} out of range for width {width}")]
    PositionOutOfRange { position: usize, width: usize },
    #[error("invalid schema: {0}")]
    InvalidSchema(String),

    #[error("conflicting labels for pattern {0}")]
    Conflict(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("cannot parse rule: {0}")]
    RuleParse(String),

    #[error("oracle width {width} exceeds the guard of {max}")]
    OracleWidth { width: usize, max: usize },
    #[error("planted cubes cover the whole input space; no class-0 row exists")]
    PlantedCoversSpace,
}
