use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("duplicate record id '{0}'")]
    DuplicateRecord(String),

    #[error("work registry: {0}")]
    Registry(String),

    #[error("unknown work '{0}'")]
    UnknownWork(String),

    #[error("lexicon: {0}")]
    Lexicon(String),

    #[error("invalid period edges: {0}")]
    PeriodEdges(String),

    #[error("test undefined: {0}")]
    UndefinedTest(String),

    #[error("comparison undefined: {0}")]
    UndefinedComparison(String),

    #[error("unknown output format '{0}'")]
    UnknownFormat(String),

    #[error("structured document: {0}")]
    Structured(String),

    #[error("fixture construction: {0}")]
    Fixture(String),
}
