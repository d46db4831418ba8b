use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("attempted to invert zero modulo {0}")]
    ZeroInverse(u64),

    #[error("operands live in different fields (modulus {left} vs {right})")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("operands belong to different contexts")]
    ContextMismatch,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("no prime of the required shape found below {ceiling}")]
    NoPrimeFound { ceiling: u64 },

    #[error("degree {degree} exceeds the brute-force limit of {max}")]
    DegreeGuard { degree: usize, max: usize },

    #[error("sample {index}: left component is not in the subring R_q,0")]
    NotInSubring { index: usize },

    #[error("no samples supplied")]
    EmptySamples,

    #[error("attack inapplicable: smallness region has {cardinality} elements but q = {q}")]
    AttackInapplicable { cardinality: usize, q: u64 },

    #[error("malformed sample file (line {line}): {msg}")]
    Format { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::AttackInapplicable { .. } => 3,
            Error::Io(_) | Error::Format { .. } => 4,
            _ => 2,
        }
    }
}
