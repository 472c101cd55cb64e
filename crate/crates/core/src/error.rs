use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: rule has neither head nor body")]
    EmptyRule { line: usize, column: usize },
    #[error("{what} has size {size}, above the limit of {limit}")]
    SizeGuard {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("program is not Horn")]
    NotHorn,
    #[error("atom set is not a strong Normal-backdoor of the program")]
    NotABackdoor,
    #[error("subset is not contained in the backdoor")]
    NotInBackdoor,
    #[error("candidate set is not a model of the reduct")]
    NotAModel,
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("invalid atom name `{0}`")]
    InvalidAtomName(String),
    #[error("malformed assignment: {0}")]
    MalformedAssignment(String),
    #[error("property formula references non-atom variable {0}")]
    PropertyVariable(u32),
    #[error("decoded model {0} failed answer-set verification")]
    DecodeVerification(String),
    #[error("invalid DIMACS input: {0}")]
    Dimacs(String),
    #[error(transparent)]
    Solver(#[from] crate::solver::SolverError),
}

pub type Result<T> = std::result::Result<T, Error>;
