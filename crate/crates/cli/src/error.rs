use qlpair_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// The hypotheses of the requested check do not hold.
    #[error("{0}")]
    Hypotheses(String),
    #[error("search failed: {0}")]
    SearchFailed(String),
}

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const HYPOTHESES: i32 = 2;
    pub const PARSE: i32 = 3;
    pub const SEARCH: i32 = 4;
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => exit::PARSE,
            CliError::Hypotheses(_) => exit::HYPOTHESES,
            CliError::SearchFailed(_) => exit::SEARCH,
            CliError::Core(e) => match e {
                CoreError::InvalidField(_) => exit::PARSE,
                CoreError::ReductionFailed { .. } => exit::SEARCH,
                _ => exit::HYPOTHESES,
            },
        }
    }
}
