use thiserror::Error;

/// Process exit status for malformed input files or arguments.
pub const EXIT_PARSE: i32 = 2;
/// Process exit status for inputs that carry no usable state.
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] ebm_core::Error),
}

impl CliError {
    /// Line number for file errors (0 when the problem is not tied to a line).
    pub fn line(&self) -> Option<usize> {
        match self {
            CliError::Parse { line, .. } | CliError::Format { line, .. } => Some(*line),
            _ => None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        use ebm_core::Error as E;
        match self {
            CliError::Parse { .. } | CliError::Format { .. } | CliError::Io { .. } | CliError::Config(_) => {
                EXIT_PARSE
            }
            CliError::Core(E::Range(_) | E::Dimension(_) | E::NonFinite(_)) => EXIT_PARSE,
            CliError::Core(
                E::DegenerateInput(_) | E::Precondition(_) | E::NumericalDegeneracy(_) | E::ImpossibleOutcome(_),
            ) => EXIT_DEGENERATE,
        }
    }
}
