//! Library behind the `betti` command-line tool.

pub mod commands;
pub mod fixture;
pub mod input;
pub mod random;
pub mod render;
pub mod verify;

pub use commands::{run, Outcome};

/// Process exit statuses.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    /// An internal consistency check failed.
    pub const INTERNAL: i32 = 1;
    /// The asked-about property is false for the input, or the element is
    /// not in the semigroup.
    pub const PROPERTY_FALSE: i32 = 2;
    pub const PARSE: i32 = 3;
    pub const RESOURCE_BOUND: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] betti_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use betti_core::Error as E;
        match self {
            Self::Parse(_) | Self::Io(_) => exit::PARSE,
            Self::Core(e) => match e {
                E::DimensionMismatch { .. } | E::InvalidMatrix(_) | E::InvalidPartition(_) | E::InvalidInput(_) => {
                    exit::PARSE
                }
                E::NotMember | E::NotSingleBetti | E::NotGluing(_) => exit::PROPERTY_FALSE,
                E::BoundExceeded { .. } => exit::RESOURCE_BOUND,
                E::Inconsistent(_) => exit::INTERNAL,
            },
        }
    }
}
