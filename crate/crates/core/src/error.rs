use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Partial progress reported when a Gröbner computation hits a limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitDiagnostics {
    pub pairs_processed: usize,
    pub max_degree_reached: u32,
    pub basis_size: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("cyclotomic order mismatch: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("polynomials live in different rings or orders")]
    AmbientMismatch,

    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("generator is not homogeneous for the declared grading: {0}")]
    NotHomogeneous(String),

    #[error("{0} has no ideal presentation (closed form only)")]
    NoIdealPresentation(String),

    #[error("Groebner limit exceeded ({}): {} pairs processed, max degree {}, basis size {}",
        .0.reason, .0.pairs_processed, .0.max_degree_reached, .0.basis_size)]
    LimitExceeded(LimitDiagnostics),

    #[error("integrity error: {0}")]
    Integrity(String),
}
