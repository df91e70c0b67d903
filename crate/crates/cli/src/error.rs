use std::path::Path;

use thiserror::Error;
use wehrlsim::ErrorCategory;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}, key `{key}`: {reason}")]
    Parse { line: usize, key: String, reason: String },

    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),

    #[error("{0}")]
    Core(#[from] wehrlsim::Error),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("manifest: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Short tag printed with every error.
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Parse { .. } | CliError::Validation(_) | CliError::Json(_) => "config",
            CliError::Core(e) => match e.category() {
                ErrorCategory::Config => "config",
                ErrorCategory::Numerical => "numerical",
            },
            CliError::Io { .. } => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.category() {
            "config" => 2,
            "numerical" => 3,
            _ => 4,
        }
    }
}
