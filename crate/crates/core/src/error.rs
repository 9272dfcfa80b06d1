//! Error type shared by every operation in the crate.

use thiserror::Error;

/// Failure modes of the library.
///
/// Variants fall into three families, which the command-line front end maps to
/// distinct exit codes: malformed input ([`Error::Parse`]), mathematical
/// precondition failures (most variants) and exhausted randomized searches
/// ([`Error::BudgetExhausted`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input could not be decoded.
    #[error("parse error: {0}")]
    Parse(String),
    /// Operands live over different fields.
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    /// Operands have incompatible shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// Two objects were required to have equal rank.
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    /// A requested rank is not a multiple of `1/n` or otherwise unreachable at
    /// the current matrix size.
    #[error("RankNotRepresentable: {0}")]
    RankNotRepresentable(String),
    /// A matrix expected to be invertible is singular.
    #[error("matrix is not invertible")]
    NotInvertible,
    /// A matrix expected to satisfy `e^2 = e` does not.
    #[error("matrix is not idempotent")]
    NotIdempotent,
    /// A matrix expected to satisfy `u^2 = 1` does not.
    #[error("matrix is not an involution")]
    NotInvolution,
    /// A matrix expected to satisfy `x^2 = 0` does not.
    #[error("matrix is not square-zero")]
    NotSquareZero,
    /// The operation is only defined in a particular characteristic.
    #[error("wrong characteristic: {0}")]
    WrongCharacteristic(String),
    /// A stated precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The operation is not available for the given field.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A randomized search ran out of attempts without finding a witness.
    #[error("BudgetExhausted after {attempts} attempts")]
    BudgetExhausted {
        /// Number of attempts made.
        attempts: usize,
    },
    /// An exhaustive enumeration would exceed the size guard.
    #[error("enumeration too large: {0}")]
    EnumerationTooLarge(String),
}

impl Error {
    /// Short machine-readable tag for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "Parse",
            Error::FieldMismatch(..) => "FieldMismatch",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::RankMismatch(..) => "RankMismatch",
            Error::RankNotRepresentable(_) => "RankNotRepresentable",
            Error::NotInvertible => "NotInvertible",
            Error::NotIdempotent => "NotIdempotent",
            Error::NotInvolution => "NotInvolution",
            Error::NotSquareZero => "NotSquareZero",
            Error::WrongCharacteristic(_) => "WrongCharacteristic",
            Error::Precondition(_) => "Precondition",
            Error::Unsupported(_) => "Unsupported",
            Error::BudgetExhausted { .. } => "BudgetExhausted",
            Error::EnumerationTooLarge(_) => "EnumerationTooLarge",
        }
    }
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
