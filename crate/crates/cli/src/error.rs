use thiserror::Error;

/// Failures surfaced by the command-line front end. Each maps to a fixed
/// process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Input(qvar_core::Error),
    #[error("non-Hermitian input: {0}")]
    NotHermitian(qvar_core::Error),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("{0} check(s) failed")]
    Verify(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Io { .. } | CliError::Parse(_) | CliError::Input(_) => 2,
            CliError::NotHermitian(_) => 3,
            CliError::Solver(_) => 4,
        }
    }
}

impl From<qvar_core::Error> for CliError {
    fn from(e: qvar_core::Error) -> Self {
        use qvar_core::Error as E;
        match e {
            E::NotHermitian(_) => CliError::NotHermitian(e),
            E::UnsupportedDimension(_) | E::Domain(_) => CliError::Solver(e.to_string()),
            _ => CliError::Input(e),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
