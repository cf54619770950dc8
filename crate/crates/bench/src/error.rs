use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Solver(#[from] tr1da::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, BenchError>;
