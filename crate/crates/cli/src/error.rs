use serde::Serialize;
use serde_json::{json, Value};
use slhnet_core::Error as CoreError;

/// One problem found while reading a network description.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchemaIssue {
    /// JSON path of the offending value, when known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    pub message: String,
}

impl SchemaIssue {
    pub fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        SchemaIssue { path: Some(path.into()), line: None, column: None, message: message.into() }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("schema error: {}", .0.iter().map(|i| i.message.as_str()).collect::<Vec<_>>().join("; "))]
    Schema(Vec<SchemaIssue>),
    #[error("{0}")]
    Usage(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema(vec![SchemaIssue::at(path, message)])
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 for bad input, 3 for an ill-posed interconnection, 4 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) | CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                CoreError::IllPosed { .. } | CoreError::Singular { .. } => 3,
                CoreError::Pole { .. }
                | CoreError::SpectrumProximity { .. }
                | CoreError::NoConvergence(_)
                | CoreError::OutOfRange(_)
                | CoreError::CrossCheck { .. } => 4,
                _ => 2,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            3 => "ill_posed",
            4 => "numerical",
            _ => match self {
                CliError::Io { .. } => "io",
                CliError::Usage(_) => "usage",
                _ => "schema",
            },
        }
    }

    /// `{"error": {"kind", "message", "exit_code", ...}}`
    pub fn to_json(&self) -> Value {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() });
        match self {
            CliError::Schema(issues) => body["issues"] = json!(issues),
            CliError::Core(CoreError::IllPosed { sigma_min }) => body["sigma_min"] = json!(sigma_min),
            CliError::Core(CoreError::Singular { context, sigma_min }) => {
                body["sigma_min"] = json!(sigma_min);
                body["context"] = json!(context);
            }
            CliError::Core(CoreError::CrossCheck { discrepancy, .. }) => body["discrepancy"] = json!(discrepancy),
            _ => {}
        }
        json!({ "error": body })
    }
}

pub type CliResult<T> = Result<T, CliError>;
