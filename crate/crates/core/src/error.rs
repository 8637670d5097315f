use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("element is not h-homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("basis is not a completed Gröbner basis: {0}")]
    IncompleteBasis(String),
    #[error("complex is not minimal: {0}")]
    NotMinimal(String),
    #[error("V-order {order} exceeds truncation index {k1}")]
    VOrderExceedsTruncation { order: i64, k1: i64 },
    #[error("b-function check failed: {0}")]
    BFunction(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn at(self, stage: &'static str) -> Error {
        Error::Stage { stage, source: Box::new(self) }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
