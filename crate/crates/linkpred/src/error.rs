//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("xml parse error at line {line}: {msg}")]
    Xml { line: u64, msg: String },

    #[error("input is empty")]
    EmptyInput,

    #[error("input has no <dblp> root element")]
    MissingRoot,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid year range: {lo}..={hi}")]
    InvalidYearRange { lo: i32, hi: i32 },

    #[error("unknown author id {0}")]
    UnknownAuthor(u32),

    #[error("invalid edge ({u}, {v}): {msg}")]
    InvalidEdge { u: u32, v: u32, msg: String },

    #[error("pair ({u}, {v}) has identical endpoints")]
    SelfPair { u: u32, v: u32 },

    #[error("error for pair ({u}, {v}): {source}")]
    AtPair {
        u: u32,
        v: u32,
        #[source]
        source: Box<Error>,
    },

    #[error("graph has no edges: no positive pairs to sample")]
    NoPositives,

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("class {class} has {count} instances, fewer than k = {k}")]
    ClassTooSmall { class: u8, count: usize, k: usize },

    #[error("labels contain a single class only")]
    SingleClass,

    #[error("non-finite feature value at column {column}")]
    NonFiniteFeature { column: usize },

    #[error("schema mismatch: expected [{expected}], got [{got}]")]
    SchemaMismatch { expected: String, got: String },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("confusion counts are empty")]
    EmptyCounts,

    #[error("arff error at line {line}: {msg}")]
    Arff { line: usize, msg: String },

    #[error("model format error at line {line}: {msg}")]
    ModelFormat { line: usize, msg: String },

    #[error("invalid model specification: {0}")]
    InvalidSpec(String),
}

impl Error {
    /// Attach pair identity to an error raised while processing (u, v).
    pub fn at_pair(self, u: u32, v: u32) -> Error {
        Error::AtPair {
            u,
            v,
            source: Box::new(self),
        }
    }
}
