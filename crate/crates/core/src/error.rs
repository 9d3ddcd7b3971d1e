use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// The variants fall into two families that the CLI maps to distinct exit
/// codes: precondition/domain failures (the caller asked for something
/// outside an operation's domain) and internal-consistency failures (two
/// independent computations of the same quantity disagreed).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported region: {0}")]
    UnsupportedRegion(String),

    #[error("capacity error: sieve limit {limit} exceeds the memory budget of {budget}")]
    Capacity { limit: u64, budget: u64 },

    #[error("resolution error: quadrature step {step} exceeds the bound {bound}")]
    Resolution { step: f64, bound: f64 },

    #[error("truncation error: neglected tail ratio {achieved:e} exceeds {allowed:e}")]
    Truncation { achieved: f64, allowed: f64 },

    #[error("singular factor: |1 - p^-s| vanished at p = {prime}")]
    SingularFactor { prime: u64 },

    #[error("constraint error: kappa = {kappa} must be below {bound} ({binding})")]
    Constraint {
        kappa: f64,
        bound: f64,
        binding: String,
    },

    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures where two independent routes disagreed or an
    /// invariant the mathematics guarantees was violated.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Consistency(_) | Error::InvariantViolation(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
