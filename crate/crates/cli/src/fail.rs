use std::fmt;
use std::path::Path;

use cca_core::Error;

/// Exit status 1: bad flags, config, lexicon or registry.
pub const EXIT_USAGE: u8 = 1;
/// Exit status 2: the data could not be read or analyzed.
pub const EXIT_DATA: u8 = 2;

#[derive(Debug)]
pub struct Fail {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Fail {
    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Self { code: EXIT_USAGE, error: error.into() }
    }

    pub fn data(error: impl Into<anyhow::Error>) -> Self {
        Self { code: EXIT_DATA, error: error.into() }
    }

    pub fn context(self, msg: impl fmt::Display + Send + Sync + 'static) -> Self {
        Self { code: self.code, error: self.error.context(msg) }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Registry(_) | Error::Lexicon(_) | Error::PeriodEdges(_) | Error::UnknownFormat(_) => Fail::usage(e),
            _ => Fail::data(e),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, Fail>;

/// Which exit status a missing or unreadable file maps to.
#[derive(Debug, Clone, Copy)]
pub enum FileRole {
    Config,
    Data,
}

pub fn read_file(path: &Path, what: &str, role: FileRole) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| {
        let err = anyhow::anyhow!("cannot read {what} '{}': {e}", path.display());
        match role {
            FileRole::Config => Fail::usage(err),
            FileRole::Data => Fail::data(err),
        }
    })
}
