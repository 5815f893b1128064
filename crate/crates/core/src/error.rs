use thiserror::Error;

/// Errors raised by the exact invariant engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("duplicate abscissa {0} in interpolation data")]
    DuplicateAbscissa(String),

    #[error("sequence is not eventually polynomial of degree <= {degree_bound} on the progression m = {step}k")]
    NotEventuallyPolynomial { degree_bound: usize, step: u64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("not a facet of the polytope")]
    NotAFacet,

    #[error("not relatively ample: {0}")]
    NotRelativelyAmple(String),

    #[error("polarization is not anticanonical for this pair")]
    NotAnticanonical,

    #[error("fan is not simplicial at vertex {0}")]
    NonSimplicial(usize),

    #[error("nef decomposition failed up to multiple {0}")]
    NefDecomposition(u64),

    #[error("measure is not a probability measure (total mass {0})")]
    NotProbability(String),

    #[error("invariant violated: {identity}: {detail}")]
    InvariantViolation { identity: String, detail: String },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn violation(identity: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::InvariantViolation {
            identity: identity.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
