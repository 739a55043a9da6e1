use num_bigint::BigUint;
use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-domain input (unsorted roots, wrong lengths, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A value list does not have the expected length.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// An argument that must be prime is not.
    #[error("{0} is not prime")]
    NotPrime(u64),

    /// The characteristic polynomial of a matrix is not the expected
    /// split polynomial for the given roots.
    #[error("characteristic polynomial does not match the root configuration")]
    CharPolyMismatch,

    /// An exhaustive enumeration would exceed the configured budget.
    #[error("enumeration budget exceeded: delta = {delta} > max = {max}")]
    BudgetExceeded { delta: BigUint, max: u64 },

    /// A lattice operation received a rank-deficient generating set.
    #[error("generating set does not span a full-rank lattice")]
    RankDeficient,

    /// A lattice claimed to be stable under the ring action is not.
    #[error("lattice is not stable under multiplication by the roots")]
    NotStable,

    /// An operation is only defined for certain degrees.
    #[error("operation `{op}` is not available for degree n = {n}")]
    UnsupportedDegree { op: &'static str, n: usize },

    /// Inputs are larger than the exact desk-scale routines support.
    #[error("beyond desk scale: {0}")]
    BeyondDeskScale(String),

    /// An internal exactness assertion failed; indicates a bug.
    #[error("internal exactness violation: {0}")]
    Inexact(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line interface.
    ///
    /// 2 invalid input, 3 budget exhaustion, 1 anything else
    /// (property failures are raised by the CLI itself, not here).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 3,
            Error::Io(_) => 1,
            Error::Inexact(_) => 1,
            _ => 2,
        }
    }
}
