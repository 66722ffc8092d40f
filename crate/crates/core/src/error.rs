use std::io;

use thiserror::Error;

use crate::index::ItemId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate external id `{0}`")]
    DuplicateId(String),

    #[error("item `{0}` has no indexable terms after preprocessing")]
    EmptyItem(String),

    #[error("unknown item id {0}")]
    UnknownItem(ItemId),

    #[error("unknown external id `{0}`")]
    UnknownExternalId(String),

    #[error("query has no content terms after preprocessing")]
    EmptyQuery,

    #[error("no item matches any query term; feedback set is empty")]
    EmptyFeedback,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("document posterior is not normalized (sum = {0})")]
    UnnormalizedPosterior(f64),

    #[error("index format error: {0}")]
    Format(String),

    #[error("index format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("index file is truncated: {0}")]
    Truncated(String),

    #[error("index checksum mismatch: stored {stored:016x}, computed {computed:016x}")]
    Checksum { stored: u64, computed: u64 },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("corpus error: {0}")]
    Corpus(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
