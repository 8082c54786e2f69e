use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("invalid modulus {0}: must be at least 2")]
    InvalidModulus(u64),
    #[error("relations are not contained in the generated submodule (relation row {0})")]
    NotSubmodule(usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("objects live over different groups")]
    AmbientMismatch,
    #[error("not a group homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("{what} of size {size} exceeds the configured limit {limit}")]
    BudgetExceeded {
        what: String,
        size: u128,
        limit: u128,
    },
    #[error("category mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid object: {0}")]
    InvalidObject(String),
    #[error("value {0} is not a unit modulo {1}")]
    NotAUnit(u64, u64),
    #[error("{n} does not divide {m}")]
    NotADivisor { n: u64, m: u64 },
    #[error("resolution depth exhausted at resolution degree {0}; build with a larger depth")]
    DepthExhausted(usize),
    #[error("degree {degree} outside the safe window [{lo}, {hi}]")]
    OutsideWindow { degree: i64, lo: i64, hi: i64 },
    #[error("schema error at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("empty tower")]
    EmptyTower,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn budget(
        what: impl Into<String>,
        size: impl TryInto<u128>,
        limit: impl TryInto<u128>,
    ) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            size: size.try_into().unwrap_or(u128::MAX),
            limit: limit.try_into().unwrap_or(u128::MAX),
        }
    }

    pub fn schema(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            msg: msg.into(),
        }
    }

    /// Whether the error is a resource-budget violation (CLI exit code 3).
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
