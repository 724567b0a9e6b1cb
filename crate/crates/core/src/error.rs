use thiserror::Error;

/// Errors raised while building or evaluating copula inputs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {0} is not supported (need 2 <= n <= {max})", max = crate::MAX_DIM)]
    Dimension(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("coordinate {index} = {value} lies outside [0, 1]")]
    CoordinateOutOfRange { index: usize, value: f64 },

    #[error("malformed direction: {0}")]
    MalformedDirection(String),

    #[error("box lower corner exceeds upper corner on axis {0}")]
    InvertedBox(usize),

    #[error("parameter {name} = {value} is out of range {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("family needs parameter {0}")]
    MissingParameter(&'static str),

    #[error("{family} is only a copula for n = 2 (got n = {dim})")]
    BivariateOnly { family: &'static str, dim: usize },

    #[error("unknown copula family '{0}'")]
    UnknownFamily(String),

    #[error("survival copulas may not be nested")]
    NestedSurvival,

    #[error("marginal index {index} is out of range for dimension {dim}")]
    MarginalIndex { index: usize, dim: usize },

    #[error("direction {0} is pure; the mixed characterization needs both signs present")]
    PureDirection(String),

    #[error("the pairwise inequality for pure direction {direction} is only established for n <= 3 (got n = {dim})")]
    UnsupportedPure { direction: String, dim: usize },

    #[error("grid resolution must be at least 2 (got {0})")]
    GridResolution(usize),

    #[error("pair is not ordered: lower point exceeds upper point on axis {0}")]
    UnorderedPair(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
