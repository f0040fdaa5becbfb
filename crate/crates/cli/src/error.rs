use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config key `{key}`: {reason}")]
    Config { key: &'static str, reason: String },

    #[error("config key `{0}` is not recognised")]
    UnknownKey(String),

    #[error("config line {line}: {reason}")]
    Syntax { line: usize, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Core(#[from] twt_core::TwtError),
}

impl CliError {
    pub(crate) fn config(key: &'static str, reason: impl Into<String>) -> Self {
        CliError::Config {
            key,
            reason: reason.into(),
        }
    }

    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(twt_core::TwtError::Lemma1Violation { .. }) => crate::EXIT_LEMMA1,
            _ => crate::EXIT_CONFIG,
        }
    }
}
