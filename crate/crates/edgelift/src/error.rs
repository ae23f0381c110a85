use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("bad magic: expected {expected:?}")]
    BadMagic { expected: &'static str },
    #[error("unsupported {what} version {version}")]
    Version { what: &'static str, version: u8 },
    #[error("payload has {got} bytes, header requires {expected}")]
    Truncated { expected: usize, got: usize },
    #[error("file has {got} bytes, expected exactly {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{0} does not fit the file format")]
    Unrepresentable(&'static str),
    #[error("config: {0}")]
    Config(String),
    #[error("report: {0}")]
    Report(String),
    #[error("reconstruction of {method} differs from the input at pair {pair}")]
    Reconstruction { method: &'static str, pair: usize },
    #[error(transparent)]
    Core(#[from] edgelift_core::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }

    /// Process exit code: 1 for a failed reconstruction, 2 for everything
    /// else (bad input or usage).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Reconstruction { .. } => 1,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
