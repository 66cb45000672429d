use thiserror::Error;

/// Errors raised by the solvers, relaxations and harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MoipError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("objective vector must be nonempty with finite components")]
    InvalidVector,

    #[error(
        "integer box holds {volume} points, above the enumeration cap of {cap}; \
         enable branch-and-bound for larger boxes"
    )]
    EnumerationCapExceeded { volume: u128, cap: u128 },

    #[error("lattice holds {size} points, above the cap of {cap}")]
    LatticeCapExceeded { size: u128, cap: u128 },

    #[error("weight vector must be strictly positive, got component {value} at index {index}")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("operation supports k = 2 objectives only, instance has k = {0}")]
    UnsupportedDimension(usize),

    #[error("problem is infeasible: {0}")]
    Infeasible(String),

    #[error("problem is unbounded: {0}")]
    Unbounded(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("trial {trial} (seed {seed}) failed: {source}")]
    Trial {
        trial: usize,
        seed: u64,
        #[source]
        source: Box<MoipError>,
    },
}

impl MoipError {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            MoipError::Numerical(_) => 3,
            MoipError::Trial { source, .. } => source.exit_code(),
            _ => 2,
        }
    }

    pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(MoipError::DimensionMismatch { expected, found })
        }
    }
}

pub type Result<T, E = MoipError> = std::result::Result<T, E>;
