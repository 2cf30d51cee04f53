use std::path::PathBuf;

use rectpack::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    /// The packing fails validation.
    #[error("infeasible packing: {0}")]
    Infeasible(String),
}

impl CliError {
    /// 2 for infeasibility, 3 for budget exhaustion, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Budget { .. }) => 3,
            CliError::Core(Error::Infeasible(_)) | CliError::Infeasible(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn at(path: &std::path::Path, e: Error) -> CliError {
        match e {
            Error::Parse { line, column, message } => CliError::Parse {
                path: path.to_path_buf(),
                line,
                column,
                message,
            },
            other => CliError::Input {
                path: path.to_path_buf(),
                source: other,
            },
        }
    }
}
