use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Decode {
        path: PathBuf,
        #[source]
        source: png::DecodingError,
    },
    #[error("{0}")]
    Encode(#[from] png::EncodingError),
    #[error("{path}: unsupported PNG layout ({what})")]
    Unsupported { path: PathBuf, what: String },
    #[error("manifest {path} line {line}: {message}")]
    Manifest {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Core(#[from] sparrow_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("manifest has no entries")]
    EmptyManifest,
    #[error("no image in the manifest could be evaluated")]
    NothingEvaluated,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error: 1 usage, 2 I/O, 3 estimation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Core(e) => match e {
                sparrow_core::Error::EvenKernel(_)
                | sparrow_core::Error::KernelTooLarge { .. }
                | sparrow_core::Error::InvalidParameter(_) => 1,
                _ => 3,
            },
            Error::NothingEvaluated => 3,
            Error::Io { .. }
            | Error::Decode { .. }
            | Error::Encode(_)
            | Error::Unsupported { .. }
            | Error::Manifest { .. }
            | Error::EmptyManifest
            | Error::Csv(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
