use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },

    #[error("{file}:{line}: unknown object id `{id}`")]
    UnknownEdgeEndpoint { file: String, line: usize, id: String },

    #[error("object `{id}` declared with type `{existing}` and again with type `{conflicting}`")]
    ConflictingObjectType {
        id: String,
        existing: String,
        conflicting: String,
    },

    #[error("unknown object type `{0}`")]
    UnknownType(String),

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("object `{object}` has type `{found}`, expected `{expected}`")]
    ObjectTypeMismatch {
        object: String,
        expected: String,
        found: String,
    },

    #[error("no stratified meta structure exists for source type `{0}`")]
    NoSms(String),

    #[error("layers of the stratified meta structure for `{0}` are not periodic from the BFS height")]
    NotStratified(String),

    #[error("{0}")]
    UnsupportedStructure(String),

    #[error("depth must be an even number >= 2, got {0}")]
    InvalidDepth(usize),

    #[error("invalid structure: {0}")]
    IncompatibleStructure(String),

    #[error("empty type set")]
    EmptyTypeSet,

    #[error("negative matrix entry {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),
}
