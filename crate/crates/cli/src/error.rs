use std::path::PathBuf;

use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] bachelier_core::Error),
    #[error("{path}: {message}")]
    Schema { path: PathBuf, message: String },
    #[error("{path}: row {row}: {message}")]
    Row {
        path: PathBuf,
        row: usize,
        message: String,
    },
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Machine-readable form written to stderr on failure.
#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row: Option<usize>,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        use bachelier_core::Error as E;
        match self {
            CliError::Core(e) => match e {
                E::InvalidParameter { .. } => "invalid_parameter",
                E::MaturityReached { .. } => "maturity_reached",
                E::DegenerateMarket { .. } => "degenerate_market",
                E::Arbitrage { .. } => "arbitrage",
                E::Input(_) => "input",
                E::Estimation(_) => "estimation",
                E::TreeTooLarge { .. } => "tree_too_large",
                E::Unidentifiable(_) => "unidentifiable",
            },
            CliError::Schema { .. } => "schema",
            CliError::Row { .. } => "row",
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Json(_) => "json",
        }
    }

    pub fn report(&self) -> ErrorReport {
        ErrorReport {
            kind: self.kind(),
            message: self.to_string(),
            row: match self {
                CliError::Row { row, .. } => Some(*row),
                _ => None,
            },
        }
    }
}
