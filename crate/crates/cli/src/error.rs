use std::path::Path;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// Malformed input, an infeasible assignment or an I/O failure.
    #[error("{0}")]
    Data(String),
    /// The oracle declined an instance or ran out of search budget.
    #[error("{0}")]
    Refused(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Refused(_) => 3,
        }
    }

    pub(crate) fn context(self, what: impl std::fmt::Display) -> Self {
        match self {
            CliError::Usage(m) => CliError::Usage(format!("{what}: {m}")),
            CliError::Data(m) => CliError::Data(format!("{what}: {m}")),
            CliError::Refused(m) => CliError::Refused(format!("{what}: {m}")),
        }
    }
}

impl From<svcp::Error> for CliError {
    fn from(e: svcp::Error) -> Self {
        match e {
            svcp::Error::Refused(_) | svcp::Error::ResourceExhausted(_) => CliError::Refused(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

pub(crate) fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, bytes).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}
