use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("amplitude array has length {actual}, dims require {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("state is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("state has zero norm")]
    ZeroState,

    #[error("invalid dimensions: {0}")]
    InvalidDims(String),

    #[error("invalid bipartition: {0}")]
    InvalidPartition(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("state too large: {0}")]
    TooLarge(String),

    #[error("measure needs {expected} subsystems, state has {actual}")]
    WrongArity { expected: String, actual: usize },

    #[error("measure needs dims {expected:?}, state has {actual:?}")]
    WrongDims {
        expected: Vec<usize>,
        actual: Vec<usize>,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("too many tensor factors: {0} (at most {max})", max = crate::multilinear::MAX_FACTORS)]
    TooManyFactors(usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("kets have different arity: {0}")]
    ArityMismatch(String),

    #[error("supplied dims too small: {0}")]
    DimTooSmall(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
