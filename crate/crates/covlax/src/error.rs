use thiserror::Error;

/// Errors shared across the geometry, symmetry and dynamics layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A point violates the chart predicate of the active metric.
    #[error("point outside chart domain: {what}")]
    OutsideChart { what: String },

    /// The metric (or another matrix that must be inverted) is numerically singular.
    #[error("numerically singular matrix (condition estimate {cond:.3e})")]
    Singular { cond: f64 },

    /// The metric eigenvalue signs do not match the declared signature.
    #[error("metric signature mismatch: expected {expected:?}, found {found:?}")]
    SignatureMismatch { expected: Vec<i8>, found: Vec<i8> },

    /// Rank bookkeeping failure for antisymmetric forms.
    #[error("rank error: {0}")]
    Rank(String),

    /// Tensor dimension mismatch between operands.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Construction asked for with |p^2| below the null threshold.
    #[error("momentum is numerically null (p^2 = {p_squared:.3e}); projector-based constructions are undefined")]
    NullMomentum { p_squared: f64 },

    /// A Lax-operator kind was instantiated with a symmetry field of the wrong rank.
    #[error("lax operator {kind} requires a rank-{expected} field, got rank {found}")]
    LaxRank {
        kind: &'static str,
        expected: usize,
        found: usize,
    },

    /// An operation is outside the supported capability envelope.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Catalog lookup failure.
    #[error("unknown catalog entry `{0}`")]
    UnknownSpacetime(String),

    /// A registered symmetry field failed its verification gate.
    #[error("gate failure for `{check}`: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    GateFailure {
        check: String,
        residual: f64,
        tolerance: f64,
    },

    /// Trajectory-level failures carry the partial trajectory so callers can inspect it.
    #[error("integration left the chart at t = {t:.6}: {reason}")]
    ChartExit {
        t: f64,
        reason: String,
        partial: Box<crate::dynamics::Trajectory>,
    },

    #[error("maximum step count {max_steps} exceeded at t = {t:.6}")]
    MaxSteps {
        t: f64,
        max_steps: usize,
        partial: Box<crate::dynamics::Trajectory>,
    },

    /// Too few samples for a finite-difference residual.
    #[error("need at least {needed} trajectory samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
