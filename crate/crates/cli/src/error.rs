use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cginibre::Error),
    #[error("identity check failed: {0}")]
    Identity(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) if e.is_numerical() => 2,
            CliError::Core(_) => 1,
            CliError::Identity(_) => 3,
            CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e) if e.is_numerical() => "numerical",
            CliError::Core(_) => "domain",
            CliError::Identity(_) => "identity",
            CliError::Io(_) | CliError::Csv(_) => "io",
        }
    }

    pub fn to_json(&self) -> String {
        json!({ "error": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() }).to_string()
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        assert_eq!(CliError::from(cginibre::Error::Domain("x".into())).exit_code(), 1);
        assert_eq!(CliError::from(cginibre::Error::BlowUp { s: 1.0 }).exit_code(), 2);
        assert_eq!(CliError::from(cginibre::Error::SingularHankel { bits: 128 }).exit_code(), 2);
        assert_eq!(CliError::Identity("x".into()).exit_code(), 3);
        let v: serde_json::Value = serde_json::from_str(&CliError::Identity("x".into()).to_json()).unwrap();
        assert_eq!(v["error"], "identity");
        assert_eq!(v["exit_code"], 3);
    }
}
