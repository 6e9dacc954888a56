use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("bin count m={m} must satisfy 1 <= m <= p={p}")]
    BinCount { m: u64, p: u64 },
    #[error("{value} is not an element of Z_{p}")]
    OutOfField { value: u64, p: u64 },
    #[error("0 has no multiplicative inverse")]
    ZeroInverse,
    #[error("no prime >= {0} fits in 64 bits")]
    Overflow(u64),
    #[error("duplicate key {0} in explicit key set")]
    DuplicateKey(u64),
    #[error("key set must not be empty")]
    EmptyKeySet,
    #[error("affine key set needs a non-zero multiplier")]
    ZeroMultiplier,
    #[error("key set of {len} elements does not fit in Z_{p}")]
    KeySetTooLarge { len: u64, p: u64 },
    #[error("elements {0}, {1}, {2} are not pairwise distinct")]
    NotDistinct(u64, u64, u64),
    #[error("bin index {index} out of range for m={m}")]
    BinOutOfRange { index: u64, m: u64 },
    #[error("{0}")]
    Domain(String),
    #[error(
        "exhaustive run needs {needed} hash evaluations, budget is {budget}; \
         use a smaller p or the Monte Carlo estimator"
    )]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
