use thiserror::Error;

/// Errors produced by the numerical kernels and the codec.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{what} = {value} outside its domain: {expected}")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// Lengths or alphabet sizes disagree.
    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// Adaptive quadrature gave up before reaching the requested tolerance.
    #[error("quadrature did not converge: estimated error {achieved:e} exceeds tolerance {requested:e}")]
    Quadrature { requested: f64, achieved: f64 },

    /// An exhaustive computation would exceed the enumeration guard.
    #[error("instance too large to enumerate: {terms} terms exceeds the limit of {limit}")]
    TooLarge { terms: u128, limit: u128 },

    /// A probability vector or transition row does not sum to one.
    #[error("{what} is not a probability distribution (sum = {sum})")]
    NotADistribution { what: &'static str, sum: f64 },

    /// The inner decoder could not map the received word back to a message.
    #[error("inner decoder failed: {0}")]
    Decode(String),

    /// Malformed descriptor, seed, or scenario input.
    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for errors that come from numerics rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Quadrature { .. })
    }
}
