use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),

    #[error("rank {rank} exceeds the configured bound {bound}")]
    RankTooLarge { rank: usize, bound: usize },

    #[error("unknown root system label {0:?}")]
    UnknownLabel(String),

    #[error("{0} is not a prime in [2, 2^31)")]
    InvalidPrime(u64),

    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),

    #[error("weight has {got} coordinates, root system has rank {rank}")]
    WeightRank { got: usize, rank: usize },

    #[error("resource cap exceeded: {what} needs dimension {required}, cap is {cap}")]
    ResourceCap {
        what: String,
        required: u128,
        cap: u128,
    },

    #[error("operation requires a root system of type G2, got {0}")]
    NotG2(String),

    #[error("multiindex {0} is not essential")]
    NotEssential(String),

    #[error("modules are defined over different fields")]
    FieldMismatch,

    #[error("integrality violated: {0}")]
    NotIntegral(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache: {0}")]
    Cache(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
