use alloc::string::String;

use crate::compare::{Dimension, Metric};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    #[error("category set is empty")]
    EmptyCategorySet,

    #[error("invalid category code {0:?}: codes must be non-empty without ';' or whitespace")]
    InvalidCategoryCode(String),

    #[error("category code {0:?} is not in the category registry")]
    UnknownCategory(String),

    #[error("category code {0:?} registered twice")]
    DuplicateCategory(String),

    #[error("category name {name:?} is used by both {first:?} and {second:?}")]
    NonInjectiveRegistry {
        name: String,
        first: String,
        second: String,
    },

    #[error("duplicate publication id {0:?}")]
    DuplicateId(String),

    #[error("publication {0:?} has citations dated before its publication year")]
    TemporalViolation(String),

    #[error("empty year range {start}-{end}")]
    EmptyYearRange { start: i32, end: i32 },

    #[error("citation window length must be at least one year")]
    InvalidWindow,

    #[error("adjacent triple needs two distinct categories, got {0:?} twice")]
    DegenerateTriple(String),

    #[error("distribution is empty")]
    EmptyDistribution,

    #[error("number of CSS scores must be at least one")]
    InvalidCssK,

    #[error("no reference values for cell {cell} in {year} with a {window}-year window")]
    MissingReference {
        cell: String,
        year: i32,
        window: u32,
    },

    #[error("expected citation rate is zero for cell {cell} in {year} with a {window}-year window")]
    ZeroExpectation {
        cell: String,
        year: i32,
        window: u32,
    },

    #[error("relative difference needs positive values, got {0}")]
    NonPositiveValue(f64),

    #[error("records mix {first:?}/{first_metric:?} with {other:?}/{other_metric:?}")]
    MixedDimensions {
        first: Dimension,
        first_metric: Metric,
        other: Dimension,
        other_metric: Metric,
    },

    #[error("researcher {0:?} has no admitted articles in the period")]
    EmptyProfile(String),

    #[error("invalid reference values: {0}")]
    InvalidReferenceValues(&'static str),

    #[error("calibration target cannot be met: {0}")]
    InfeasibleTarget(String),
}
