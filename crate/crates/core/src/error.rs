use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vote {vote} is empty")]
    EmptyVote { vote: usize },

    #[error("vote {vote} lists alternative {alternative} more than once")]
    DuplicateAlternative { vote: usize, alternative: usize },

    #[error("vote {vote} has nonpositive multiplicity")]
    NonPositiveMultiplicity { vote: usize },

    #[error("alternative {alternative} is outside the registry of {count} alternatives")]
    UnknownAlternative { alternative: usize, count: usize },

    #[error("alternative name {0:?} is registered twice")]
    DuplicateName(String),

    #[error("unknown alternative name {0:?}")]
    UnknownName(String),

    #[error("a profile needs at least one alternative")]
    NoAlternatives,

    #[error("ranking is not a permutation of {expected} alternatives")]
    InvalidRanking { expected: usize },

    #[error("element {0} of the vote does not appear in the reference ranking")]
    MissingFromReference(usize),

    #[error("{m} alternatives exceeds the exact-solver limit of {max_m}")]
    TooManyAlternatives { m: usize, max_m: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("train/test split infeasible after {retries} attempts")]
    InfeasibleSplit { retries: usize },

    #[error("ratings do not satisfy the difference constraints (residual {residual:e})")]
    InconsistentSolution { residual: f64 },

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
