use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("series is zero to precision O(pi^{0})")]
    ZeroToPrecision(i64),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("slopes not converged by level {0}")]
    NotConverged(u32),
    #[error("model chain not stationary by level {0}")]
    NotStabilized(u32),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("condition C_ell violated: {0}")]
    ConditionClViolated(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = core::result::Result<T, Error>;
