use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("reference run diverged: {0}")]
    Divergence(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Data { path: String, message: String },
    #[error(transparent)]
    Model(#[from] semiglobal_atom1d::AtomError),
    #[error(transparent)]
    Propagation(#[from] semiglobal::Error),
}

impl BenchError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) | BenchError::Model(_) => 2,
            BenchError::Divergence(_) | BenchError::Propagation(_) => 3,
            BenchError::Io { .. } | BenchError::Data { .. } => 4,
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        BenchError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;
