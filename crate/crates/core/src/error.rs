use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported system {kind}{rank}")]
    UnsupportedSystem { kind: String, rank: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{0} is not dominant")]
    NotDominant(String),

    #[error("element {0} lies outside the enumerated range (max length {1})")]
    OutOfRange(String, u32),

    #[error("{0} is not in the twisted involution set")]
    NotTwistedInvolution(String),

    #[error("vertex s{0} is not hyperspecial")]
    NotHyperspecial(usize),

    #[error("parabolic subgroup generated by {0:?} is infinite")]
    InfiniteParabolic(Vec<usize>),

    #[error("parabolic subgroup generated by {0:?} exceeds the enumeration limit")]
    TooLarge(Vec<usize>),

    #[error("memory budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("{0} is not below {1} in the Bruhat order")]
    NotBelow(String, String),

    #[error("integrality check failed: {0}")]
    Integrality(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Usage and configuration problems, as opposed to failures during a run.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::UnsupportedSystem { .. }
                | Error::NotHyperspecial(_)
                | Error::Config(_)
                | Error::BudgetExceeded(_)
                | Error::TooLarge(_)
        )
    }
}
