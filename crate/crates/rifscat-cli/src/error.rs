use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("compute error ({context}): {source}")]
    Compute {
        context: String,
        #[source]
        source: rifscat::Error,
    },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn compute(context: impl Into<String>, source: rifscat::Error) -> Self {
        CliError::Compute { context: context.into(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Compute { .. } => 3,
            CliError::Io { .. } => 4,
            CliError::Verification(_) => 1,
        }
    }
}
