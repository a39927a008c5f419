use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid generator matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid partition of generator indices: {0}")]
    InvalidPartition(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("element is not in the semigroup")]
    NotMember,

    #[error("semigroup does not have a single Betti element")]
    NotSingleBetti,

    #[error("not a gluing: {0}")]
    NotGluing(String),

    /// A search hit its declared limit before its completeness certificate
    /// was reached. `partial` renders the best value found so far, if any.
    #[error("resource bound exceeded in {what} (limit {limit}){}", partial.as_ref().map(|p| format!(", partial value {p}")).unwrap_or_default())]
    BoundExceeded {
        what: &'static str,
        limit: String,
        partial: Option<String>,
    },

    /// An identity that must hold for every affine semigroup failed on this
    /// input. Indicates an implementation bug.
    #[error("internal consistency violation: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
