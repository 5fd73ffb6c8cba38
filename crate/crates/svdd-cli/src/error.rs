//! CLI error type and its exit-code mapping.

use std::fmt;

/// Exit codes: 0 success, 2 input/config, 3 degenerate bandwidth, 4 solver
/// infeasible or degenerate, 5 model file, 6 search failure.
#[derive(Debug)]
pub enum CliError {
    /// Library error; the code depends on the variant.
    Lib(svdd::Error),
    /// Malformed input CSV.
    Csv { path: String, message: String },
    /// Unreadable, corrupt, or unsupported model file.
    ModelFile(String),
    /// Bad flag combination or value.
    Usage(String),
    /// Filesystem failure.
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(err) => match err {
                svdd::Error::DegenerateData(_) | svdd::Error::LogDomain { .. } => 3,
                svdd::Error::Infeasible(_) | svdd::Error::NoBoundarySv => 4,
                svdd::Error::AllFailed => 6,
                _ => 2,
            },
            CliError::Csv { .. } | CliError::Usage(_) => 2,
            CliError::ModelFile(_) => 5,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(err) => write!(f, "{err}"),
            CliError::Csv { path, message } => write!(f, "{path}: {message}"),
            CliError::ModelFile(message) => write!(f, "model file: {message}"),
            CliError::Usage(message) => write!(f, "{message}"),
            CliError::Io(err) => write!(f, "i/o error: {err}"),
        }
    }
}

impl From<svdd::Error> for CliError {
    fn from(err: svdd::Error) -> Self {
        CliError::Lib(err)
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err)
    }
}

pub type CliResult<T> = Result<T, CliError>;
