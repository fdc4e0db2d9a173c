use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NOT_ELLIPTIC: i32 = 3;
pub const EXIT_INPUT: i32 = 4;
pub const EXIT_IO: i32 = 5;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    #[error("operator rejected: {0}")]
    NotElliptic(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
    #[error("usage: {0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::NotElliptic(_) => EXIT_NOT_ELLIPTIC,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Io(_) => EXIT_IO,
            CliError::Usage(_) => EXIT_USAGE,
        }
    }
}

impl From<hpowers_core::SymbolError> for CliError {
    fn from(e: hpowers_core::SymbolError) -> Self {
        match e {
            hpowers_core::SymbolError::NotElliptic(_) => CliError::NotElliptic(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<hpowers_heisenberg::HeisenbergError> for CliError {
    fn from(e: hpowers_heisenberg::HeisenbergError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<hpowers_rumin::RuminError> for CliError {
    fn from(e: hpowers_rumin::RuminError) -> Self {
        CliError::Input(e.to_string())
    }
}
