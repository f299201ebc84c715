use std::path::Path;

use serde_json::{json, Value};
use vcoalg::Error;

/// Everything that ends a run with exit code 2.
#[derive(Debug)]
pub enum CliError {
    /// A library error, optionally located in an input file.
    Input {
        file: Option<String>,
        path: Option<String>,
        error: Error,
    },
    Io { file: String, message: String },
    Json { file: String, message: String },
    Config(String),
    Usage(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> CliError {
        CliError::Io {
            file: path.display().to_string(),
            message: e.to_string(),
        }
    }

    pub fn at(file: &Path, path: impl Into<String>, error: Error) -> CliError {
        CliError::Input {
            file: Some(file.display().to_string()),
            path: Some(path.into()),
            error,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Input { file, path, error } => {
                let mut v = json!({"kind": kind(error), "message": error.to_string()});
                if let Some(f) = file {
                    v["file"] = json!(f);
                }
                if let Some(p) = path.as_deref().filter(|p| !p.is_empty()) {
                    v["path"] = json!(p);
                }
                match error {
                    Error::Parse(p) => v["details"] = serde_json::to_value(p).unwrap(),
                    Error::NotATopology { witness, .. } => v["details"] = json!({ "witness": witness }),
                    _ => {}
                }
                json!({ "error": v })
            }
            CliError::Io { file, message } => json!({"error": {"kind": "Io", "file": file, "message": message}}),
            CliError::Json { file, message } => {
                json!({"error": {"kind": "Json", "file": file, "message": message}})
            }
            CliError::Config(m) => json!({"error": {"kind": "Config", "message": m}}),
            CliError::Usage(m) => json!({"error": {"kind": "Usage", "message": m}}),
        }
    }
}

impl From<Error> for CliError {
    fn from(error: Error) -> CliError {
        CliError::Input {
            file: None,
            path: None,
            error,
        }
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::NotATopology { .. } => "NotATopology",
        Error::NotAPreorder(_) => "NotAPreorder",
        Error::NotParallel => "NotParallel",
        Error::NotT0(..) => "NotT0",
        Error::NotOpen(_) => "NotOpen",
        Error::NotContinuous(_) => "NotContinuous",
        Error::SizeCapExceeded { .. } => "SizeCapExceeded",
        Error::UnboundConstant(_) => "UnboundConstant",
        Error::Parse(_) => "ParseError",
        Error::TooSmall { .. } => "TooSmall",
        Error::FunctorMismatch(..) => "FunctorMismatch",
        Error::ComponentUndefined(_) => "ComponentUndefined",
        Error::NotMono(_) => "NotMono",
        Error::NotEmbedding(_) => "NotEmbedding",
        Error::InvalidState(_) => "InvalidState",
        Error::UnsupportedFormat(_) => "UnsupportedFormat",
        Error::UnknownPoint(_) => "UnknownPoint",
        Error::DuplicatePoint(_) => "DuplicatePoint",
        Error::InvalidValue(_) => "InvalidValue",
        Error::Invalid(_) => "Invalid",
    }
}
