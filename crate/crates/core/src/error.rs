use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("polygon has no ring partition")]
    NotARing,

    #[error("ring partition {partition} is invalid for {n} vertices (need 3 <= L <= n-3)")]
    InvalidPartition { partition: usize, n: usize },

    #[error("vertex {index} has a non-finite coordinate")]
    NonFinite { index: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("transform is not invertible (determinant {det})")]
    DegenerateTransform { det: f64 },

    #[error("no vertices survived augmentation")]
    EmptyPolygon,

    #[error("only {m} vertices survived; a polygon needs at least 3")]
    DegeneratePolygon { m: usize },

    #[error("clip vertex between {0:?} does not fill a survivor gap")]
    ClipInconsistency((usize, usize)),

    #[error("metric undefined: {0}")]
    UndefinedMetric(&'static str),

    #[error("invalid index sequence: {0}")]
    InvalidSequence(String),

    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },

    #[error("format error: {0}")]
    Format(String),

    #[error("unsupported annotation format `{0}`")]
    UnsupportedFormat(String),

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
}
