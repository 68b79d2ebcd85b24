use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments, config or output path. Exit code 1.
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
        }
    }
}

/// A sweep point that did not complete. The rest of the sweep still runs;
/// any failure makes the process exit with code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    pub run: String,
    pub message: String,
}

impl RunFailure {
    pub fn new(run: impl Into<String>, err: impl std::fmt::Display) -> Self {
        RunFailure { run: run.into(), message: err.to_string() }
    }
}
