use std::fmt;
use std::io;
use std::path::{Path, PathBuf};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const NO_PATH: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const GUARD: i32 = 3;
    pub const DISAGREEMENT: i32 = 4;
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or unusable input files.
    Usage(String),
    Io {
        path: PathBuf,
        source: io::Error,
    },
    /// A size cap or solver precondition refused the instance.
    Guard(String),
    /// Two computations that must agree did not.
    Disagreement(String),
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => exit::USAGE,
            CliError::Guard(_) => exit::GUARD,
            CliError::Disagreement(_) => exit::DISAGREEMENT,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Guard(msg) => f.write_str(msg),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Disagreement(msg) => write!(f, "disagreement: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<gmcp_core::SolveError> for CliError {
    fn from(e: gmcp_core::SolveError) -> Self {
        CliError::Guard(e.to_string())
    }
}

impl From<gmcp_core::OracleError> for CliError {
    fn from(e: gmcp_core::OracleError) -> Self {
        CliError::Guard(e.to_string())
    }
}
