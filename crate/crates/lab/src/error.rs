use std::path::PathBuf;

pub type Result<T, E = LabError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("config line {line}: {message}")]
    ConfigLine { line: usize, message: String },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Solver(#[from] zoquad_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl LabError {
    /// Process exit code: 2 for configuration, 3 for solver or runtime, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::ConfigLine { .. } | LabError::Config(_) => 2,
            LabError::Solver(_) => 3,
            LabError::Io { .. } | LabError::Format { .. } => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }
}
