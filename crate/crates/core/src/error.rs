use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("polynomial must be nonzero")]
    ZeroPolynomial,
    #[error("polynomial must be nonconstant")]
    ConstantPolynomial,
    #[error("constant term must be nonzero")]
    ZeroConstantTerm,
    #[error("constant term must equal 1, found {0}")]
    ConstantTermNotOne(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot parse polynomial {input:?}: {reason}; accepted forms are a human form like \"x^2-x-1\" or a JSON array of decimal coefficient strings in descending degree like [\"1\",\"-1\",\"-1\"]")]
    Parse { input: String, reason: String },
    #[error("series has {have} coefficients, {need} required")]
    InsufficientCoefficients { have: usize, need: usize },
    #[error("internal fault: {0}")]
    InternalFault(String),
    #[error("root iteration did not converge within the precision cap of {cap} bits")]
    NonConvergence { cap: u32 },
    #[error("undecided at the requested tolerance: {0}")]
    Undecided(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("work budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
