use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}, key '{key}': {msg}")]
    Config { line: usize, key: String, msg: String },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Numerical(#[from] pcarleson::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn config(line: usize, key: &str, msg: impl ToString) -> Self {
        CliError::Config { line, key: key.to_string(), msg: msg.to_string() }
    }

    /// 2 for configuration problems, 3 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use pcarleson::Error as E;
        match self {
            CliError::Config { .. } | CliError::InvalidConfig(_) => 2,
            CliError::Numerical(E::InvalidInput(_) | E::NeedAtLeast4Points(_) | E::GridTooCoarse { .. }) => 2,
            CliError::Numerical(_) => 3,
            _ => 1,
        }
    }
}
