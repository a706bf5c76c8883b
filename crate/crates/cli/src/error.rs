use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// `line` is 0 when the text did not come from a file.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Core(#[from] tmodels_core::Error),
    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}
