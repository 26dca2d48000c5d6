use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u32),
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("differential squares to a nonzero map in degree {0}")]
    DSquaredNonzero(i64),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("invalid cubical set: {0}")]
    InvalidCubicalSet(String),
    #[error("invalid simplicial set: {0}")]
    InvalidSimplicialSet(String),
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("invalid algebra structure: {0}")]
    InvalidAlgebra(String),
    #[error("cap {cap} exceeded (requested {requested})")]
    CapExceeded { cap: usize, requested: usize },
    #[error("search budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("degree window {lo}:{hi} is too small: {reason}")]
    WindowTooSmall { lo: i64, hi: i64, reason: String },
    #[error("empty safe window")]
    EmptySafeWindow,
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

impl Error {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub const SCHEMA_TAG: &str = "squarecat/1";

/// Rejects documents tagged with another schema version; untagged input is accepted.
pub(crate) fn check_schema_tag(v: &serde_json::Value) -> Result<()> {
    match v.get("schema") {
        None => Ok(()),
        Some(t) if t == SCHEMA_TAG => Ok(()),
        Some(t) => Err(Error::schema("schema", format!("expected \"{SCHEMA_TAG}\", found {t}"))),
    }
}
