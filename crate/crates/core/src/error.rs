use thiserror::Error;

use crate::descent::Verdict;
use crate::weyl::Side;

/// Errors raised by the algebra and the decision procedure.
///
/// Verdicts (strictly nilpotent or not) are never errors; these are usage
/// problems or violated internal invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("side mismatch: {left} vs {right}")]
    SideMismatch { left: Side, right: Side },

    #[error("expected a {expected}-side element, got {found}-side")]
    WrongSide { expected: Side, found: Side },

    #[error("operation undefined on the zero element")]
    ZeroElement,

    /// The element does not depend on `x`; callers short-circuit on this.
    #[error("element has constant coefficients (free of x)")]
    SignalConstantCoefficients,

    #[error("leading coefficient is not constant")]
    NotNormalizable,

    #[error("invalid weight ({rho}, {sigma}): need coprime positive integers")]
    InvalidWeight { rho: u64, sigma: u64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A proven invariant of the descent failed to hold. Always a bug.
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// The operation needs a certified strictly nilpotent element.
    #[error("element is not certified strictly nilpotent ({})", .0.label())]
    NotCertified(Box<Verdict>),

    #[error("malformed document: {0}")]
    Document(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
