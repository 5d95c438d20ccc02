use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] qlabel::Error),
    #[error("configuration: {0}")]
    Config(String),
    #[error("statistical check failed: {0}")]
    Statistical(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for domain and configuration errors, 3 for failed statistical
    /// checks, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) | CliError::Config(_) => 2,
            CliError::Statistical(_) => 3,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
