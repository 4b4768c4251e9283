use thiserror::Error;

/// Errors across the crate. Domain errors (inputs outside the mathematical
/// domain) and argument errors (malformed calls) both map to CLI exit code 2;
/// a failed mathematical check is not an `Error` but a `false`/flag result.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base must be at least 3, got {0}")]
    BaseTooSmall(u64),
    #[error("expansion level must be at least 1")]
    LevelTooSmall,
    #[error("expansion level {0} exceeds the supported maximum of 30")]
    LevelTooLarge(u32),
    #[error("eps must be positive")]
    NonPositiveEps,
    #[error("interval endpoints out of order (lo > hi)")]
    EmptyInterval,
    #[error("Mobius denominator is not sign-definite on the interval")]
    SingularMobius,
    #[error("continued fraction must have at least one term")]
    EmptyContinuedFraction,
    #[error("partial quotient a_{0} must be at least 1")]
    ZeroQuotient(usize),
    #[error("tail interval must be strictly positive")]
    NonPositiveTail,
    #[error("index {index} exceeds the {len} available partial quotients")]
    InsufficientQuotients { index: usize, len: usize },
    #[error("index must be at least {min}, got {got}")]
    IndexTooSmall { min: usize, got: usize },
    #[error("modulus must be positive")]
    NonPositiveModulus,
    #[error("{m} and {n} are not coprime")]
    NotCoprime { m: String, n: String },
    #[error("{value} must be a power of two no smaller than {min}")]
    NotPowerOfTwo { value: u64, min: u64 },
    #[error("nhat must be at least 2^(i+r+3) = {required}, got {got}")]
    NhatTooSmall { got: u64, required: u64 },
    #[error("the decomposition applies to odd indices only, got {0}")]
    EvenIndex(usize),
    #[error("enclosures still overlap at the refinement cap width 1e-40; distinctness undecided")]
    DistinctnessUndecided,
    #[error("k = {k} must satisfy 2 <= k <= n/2 - 1 for n = {n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("invalid decimal literal {0:?}")]
    BadDecimal(String),
    #[error("{0}")]
    Usage(String),
    #[error("internal consistency check failed: {0}")]
    Internal(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
