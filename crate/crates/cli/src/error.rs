use serde_json::{json, Value};

/// Failures of a run, each with its own exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Model(#[from] evanescent::Error),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn config(path: &str, message: impl Into<String>) -> Self {
        CliError::Config {
            path: path.to_string(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Model(evanescent::Error::Quadrature { .. }) => 3,
            CliError::Model(evanescent::Error::Degenerate(_)) => 4,
            CliError::Model(evanescent::Error::Profile(_) | evanescent::Error::UnknownKind(_)) => 2,
            _ => 1,
        }
    }

    /// One-line JSON record for stderr.
    pub fn record(&self) -> Value {
        let kind = match self {
            CliError::Config { .. } => "config",
            CliError::Model(evanescent::Error::Quadrature { .. }) => "quadrature",
            CliError::Model(evanescent::Error::Degenerate(_)) => "degenerate",
            CliError::Model(evanescent::Error::NotEvanescent { .. }) => "not_evanescent",
            CliError::Model(evanescent::Error::Domain { .. }) => "domain",
            CliError::Model(_) => "input",
            CliError::Io(_) => "io",
            CliError::Other(_) => "other",
        };
        let mut rec = json!({
            "error": kind,
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        });
        match self {
            CliError::Config { path, .. } => {
                rec["path"] = json!(path);
            }
            CliError::Model(evanescent::Error::Quadrature {
                achieved,
                requested,
                evaluations,
            }) => {
                rec["achieved"] = json!(achieved);
                rec["requested"] = json!(requested);
                rec["evaluations"] = json!(evaluations);
            }
            _ => {}
        }
        rec
    }
}
