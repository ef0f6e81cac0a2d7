use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("numerical failure in {operation}: {source}")]
    Numerical {
        operation: String,
        #[source]
        source: boundfloq::Error,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Numerical { .. } => 4,
            CliError::Io { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Attach the operation name to a core error. Parameter rejections from the
/// library are validation failures of the config, not numerical ones.
pub fn numerical(operation: &str) -> impl FnOnce(boundfloq::Error) -> CliError + '_ {
    move |e| match e {
        boundfloq::Error::InvalidParameter { .. } => CliError::Validation(format!("{operation}: {e}")),
        source => CliError::Numerical { operation: operation.to_string(), source },
    }
}
