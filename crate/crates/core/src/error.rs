use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed XML at byte {offset}: {message}")]
    Xml { offset: u64, message: String },

    #[error("duplicate cast xml:id `{0}`")]
    DuplicateCastId(String),

    #[error("cast item `{item}` refers to unknown group `{group}`")]
    UnknownCastGroup { item: String, group: String },

    #[error("invalid character identifier `{0}`")]
    InvalidCharacterId(String),

    #[error("toy script: {0}")]
    Toy(#[from] crate::toy::ToyError),

    #[error("invalid flush policy: flushing on scene start requires speaker restoration")]
    InvalidFlushPolicy,

    #[error("unknown representation `{0}`")]
    UnknownDescriptor(String),

    #[error("representation `{0}` has no degree definition")]
    NoDegreeMode(String),

    #[error("rankings cover different characters; symmetric difference: {0:?}")]
    MismatchedCharacters(Vec<String>),

    #[error("rank correlation needs at least two characters, got {0}")]
    TooFewCharacters(usize),

    #[error("rank correlation undefined: a ranking has no variance")]
    ZeroVariance,

    #[error("correlation matrices have different labels")]
    MismatchedLabels,

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("window must be at least 1")]
    InvalidWindow,

    #[error("cardinality threshold must be at least 1")]
    InvalidThreshold,

    #[error("play `{0}` is missing from the play type metadata")]
    MissingPlayType(String),

    #[error("unknown play type `{0}`")]
    UnknownPlayType(String),

    #[error("{path}: expected columns {expected:?}, found {found:?}")]
    Schema {
        path: String,
        expected: Vec<String>,
        found: Vec<String>,
    },

    #[error("{path}, row {row}: {message}")]
    Field { path: String, row: usize, message: String },

    #[error("download failed (retryable): {0}")]
    Network(String),

    #[error("archive error: {0}")]
    Archive(String),

    #[error("no raw data found in {0}")]
    NoRawData(PathBuf),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether retrying the same operation may succeed.
    pub fn is_retryable(&self) -> bool {
        matches!(self, Error::Network(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
