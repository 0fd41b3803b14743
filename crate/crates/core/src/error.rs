use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("sort error: {0}")]
    Sort(String),
    #[error("arity mismatch for `{name}`: expected {expected}, got {got}")]
    Arity { name: String, expected: usize, got: usize },
    #[error("variable `{0}` not in context")]
    UnboundVariable(String),
    #[error("invalid structure: {0}")]
    Structure(String),
    #[error("invalid homomorphism: {0}")]
    Hom(String),
    #[error("chase budget exceeded")]
    BudgetExceeded,
    #[error("decomposition did not stabilize within {0} steps")]
    NotStabilized(usize),
    #[error("cyclic sort dependency through `{0}`")]
    Cycle(String),
    #[error("{0}")]
    Invalid(String),
    #[error("io error on {path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
