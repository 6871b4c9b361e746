use std::fmt;
use std::path::Path;
use std::process::ExitCode;

/// Process exit statuses, sysexits style.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// A benchmark configuration missed its success criterion.
    Criterion = 1,
    Io = 2,
    Usage = 64,
    Data = 65,
}

#[derive(Debug)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn new(status: Status, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(Status::Usage, message)
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self::new(Status::Data, message)
    }

    pub fn io(path: &Path, err: impl fmt::Display) -> Self {
        Self::new(Status::Io, format!("{}: {err}", path.display()))
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.status as u8)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<qpcp::Error> for CliError {
    fn from(err: qpcp::Error) -> Self {
        use qpcp::Error::*;
        let status = match err {
            ModeInput { .. } | InvalidConfig(_) => Status::Usage,
            _ => Status::Data,
        };
        Self::new(status, err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
