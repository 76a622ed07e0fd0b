use std::io;

use thiserror::Error;

/// Everything that can stop a command, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration or flags. Exit code 2.
    #[error("invalid `{path}`: {message}")]
    Validation { path: String, message: String },

    /// The physics rules the request out (divergence, impossible outcome, ...). Exit code 3.
    #[error(transparent)]
    Physics(cpa_core::Error),

    /// Reading or writing failed. Exit code 4.
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn io(context: impl Into<String>, source: io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } => 2,
            CliError::Physics(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

impl From<cpa_core::Error> for CliError {
    fn from(e: cpa_core::Error) -> Self {
        use cpa_core::Error as E;
        match e {
            E::ParameterDomain { name, constraint, .. } => CliError::validation(name, constraint),
            E::Structure(m) | E::Configuration(m) => CliError::validation("network", m),
            E::Lookup { kind, label } => CliError::validation(kind, format!("no such label `{label}`")),
            E::EmptyRequest => CliError::validation("samples", "must be positive"),
            other => CliError::Physics(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
