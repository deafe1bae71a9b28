use thiserror::Error;

use crate::dual_hypergroup::Label;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A label that does not name an irreducible of the dual at hand.
    #[error("label {label} is not in the {dual} dual")]
    UnknownLabel { dual: String, label: String },

    /// The operation is not implemented for this dual or measure kind.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("mismatched pairing: {0}")]
    Mismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("character table schema violation: {0}")]
    Schema(String),

    #[error("class sizes sum to {sum}, group order is {order}")]
    ClassSizes { sum: u64, order: u64 },

    #[error("character rows {row_a} and {row_b} deviate from orthonormality by {deviation:e}")]
    Orthogonality {
        row_a: usize,
        row_b: usize,
        deviation: f64,
    },

    /// Corrupt data: non-integral multiplicities, singular tables and the like.
    #[error("data integrity: {0}")]
    DataIntegrity(String),

    /// Bochner inversion produced a weight below the clamp tolerance.
    #[error("not positive: no nonnegative central measure has this transform (weights {weights:?})")]
    NotPositive { weights: Vec<f64>, max_imaginary: f64 },

    #[error("incomplete data: missing values at labels {missing:?}")]
    IncompleteData { missing: Vec<Label> },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that indicate broken input data rather than misuse.
    pub fn is_data_integrity(&self) -> bool {
        matches!(
            self,
            Error::Schema(_)
                | Error::ClassSizes { .. }
                | Error::Orthogonality { .. }
                | Error::DataIntegrity(_)
        )
    }
}
