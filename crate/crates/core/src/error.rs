use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("elements belong to different group families ({left} vs {right})")]
    FamilyMismatch { left: String, right: String },

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("invalid group table: {0}")]
    InvalidTable(String),

    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("element order exceeds cap {cap}")]
    OrderBudgetExceeded { cap: u64 },

    #[error("subgroup closure exceeded budget {budget}")]
    ClosureBudgetExceeded { budget: usize },

    #[error("set product exceeded budget {budget}")]
    ProductBudgetExceeded { budget: usize },

    #[error("subgroup is not contained in the ambient subgroup")]
    NotContained,

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("subgroup is not invariant under the endomorphism: {0}")]
    NotInvariant(String),

    #[error("induced map is not compatible with the projection: {0}")]
    NotCompatible(String),

    #[error("subgroup is not central: {0}")]
    NotCentral(String),

    #[error("no quotient model available: {0}")]
    UnsupportedQuotient(String),

    #[error("endomorphism not supported on this family: {0}")]
    UnsupportedEndo(String),

    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("trajectory table has {len} entries, need at least {needed}")]
    TableTooShort { len: usize, needed: usize },

    #[error("growth ratio has not stabilized")]
    NotStabilized,

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Resource exhaustion as opposed to a mathematical or input problem.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::OrderBudgetExceeded { .. }
                | Error::ClosureBudgetExceeded { .. }
                | Error::ProductBudgetExceeded { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Scenario(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
