use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval: lower end {lo} exceeds upper end {hi}")]
    InvalidInterval { lo: String, hi: String },

    #[error("fold count must be at least 1")]
    ZeroFold,

    #[error("grid step must be positive, got {0}")]
    NonPositiveGridStep(String),

    #[error("sumset operand must be nonempty")]
    EmptySet,

    #[error("epsilon {0} outside the open interval (0, 1/3)")]
    EpsilonOutOfRange(String),

    #[error("ell row must not be all zero")]
    ZeroEllRow,

    #[error("maximum ell row sum must be positive")]
    ZeroRowSum,

    #[error("carved set must be nonempty")]
    EmptyCarvedSet,

    #[error("carved set is not contained in [{lo}, {hi}]")]
    CarvedSetOutOfRange { lo: String, hi: String },

    #[error("parameters violate the construction inequalities: {0}")]
    InvalidParams(String),

    #[error("theta must be positive, got {0}")]
    NonPositiveTheta(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid normalized tuple {0:?}")]
    InvalidTau(Vec<u64>),

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    /// An exact identity that must hold by construction failed.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}
