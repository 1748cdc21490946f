use thiserror::Error;

/// Error classes map 1:1 to CLI exit codes: `Parse` → 2, `Precondition` → 3,
/// `Contract` → 4 (exit 0 is success).
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: u32, col: u32, msg: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An internal cross-check failed (e.g. a per-instance verified contract).
    /// Never downgraded to a warning.
    #[error("internal contract violated: {0}")]
    Contract(String),
}

impl Error {
    pub fn parse(line: u32, col: u32, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    /// CLI process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::Precondition(_) => 3,
            Error::Contract(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
