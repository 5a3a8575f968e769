use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {what}: {source}")]
    Parse { what: String, source: serde_json::Error },
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Compute(#[from] newtpot::Error),
}

impl CliError {
    /// 2 for bad input, 1 for failures during computation or output.
    pub fn exit_code(&self) -> i32 {
        use newtpot::Error as E;
        match self {
            CliError::Invalid(_) | CliError::Read { .. } | CliError::Parse { .. } => 2,
            CliError::Compute(E::Domain(_) | E::UnsupportedOrder { .. } | E::UnsupportedRegime(_) | E::Precondition(_)) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Invalid("x".into()).exit_code(), 2);
        assert_eq!(CliError::Compute(newtpot::Error::Domain("x".into())).exit_code(), 2);
        assert_eq!(CliError::Compute(newtpot::Error::UnsupportedRegime("x".into())).exit_code(), 2);
        let solver = newtpot::Error::Solver { message: "x".into(), residual: 1.0 };
        assert_eq!(CliError::Compute(solver).exit_code(), 1);
        assert_eq!(CliError::Write(std::io::Error::other("disk full")).exit_code(), 1);
    }
}
