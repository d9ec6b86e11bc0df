use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("inconsistent degree: expected {expected}, found {found}")]
    InconsistentDegree { expected: usize, found: usize },

    #[error("element is not a member of the ambient group")]
    NotAMember,

    #[error("invalid homomorphism: graph subgroup has order {graph_order} > |source| = {source_order}")]
    InvalidHom { graph_order: u128, source_order: u128 },

    #[error("expected {expected} generator images, found {found}")]
    ImageCountMismatch { expected: usize, found: usize },

    #[error("subgroup is not normal: {0}")]
    NotNormal(String),

    #[error("subgroup must be nontrivial")]
    TrivialSubgroup,

    #[error("subgroups belong to different ambient groups")]
    MismatchedAmbient,

    #[error("{what}: order {order} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        order: u128,
        cap: u128,
    },

    #[error("group order overflows 128 bits")]
    OrderOverflow,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("action acts on an empty set")]
    EmptyDomain,

    #[error("unsupported shape: {0}")]
    Unsupported(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("tower structure: {0}")]
    Structure(String),

    #[error("action rejected: {0}")]
    ActionRejected(String),

    #[error("simple group of order {0} cannot be identified from the multiplier table")]
    Unidentified(u128),

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}
