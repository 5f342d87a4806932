use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("degree must be at least 1")]
    DegreeZero,
    #[error("field of size {p}^{k} does not fit in 64 bits")]
    TooLarge { p: u64, k: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("operands have different characteristic")]
    MixedCharacteristic,
    #[error("F_p^{from} is not a subfield of F_p^{to}")]
    NotASubfield { from: u32, to: u32 },
    #[error("element encoding {0} out of range")]
    BadElement(u64),
    #[error("modulus is not monic irreducible")]
    NotIrreducible,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("degree {needed} exceeds the coefficient budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("delta1 must be nonzero")]
    Delta1Zero,
    #[error("no solution found in extensions up to degree {tried}")]
    NoSolutionInChosenExtension { tried: u32 },
    #[error("zero has no absolute value")]
    ZeroInput,
    #[error("canonical height estimate did not stabilize")]
    InexactEstimate,
    #[error("f^m(alpha) != beta")]
    NotACollision,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
