use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parameter {name} = {value} is out of range ({reason})")]
    OutOfRange {
        name: &'static str,
        value: i64,
        reason: &'static str,
    },
    #[error("{0} points are shared but the systems only have {1} and {2}")]
    SharedPoints(i64, i64, i64),
    #[error("quadratic transform needs three distinct valid indices, got ({0}, {1}, {2})")]
    BadTransformIndices(usize, usize, usize),
    #[error("L({d},{m0},{n},{m}) does not satisfy the precondition of {rule}")]
    Precondition {
        rule: &'static str,
        d: i64,
        m0: i64,
        n: i64,
        m: i64,
    },
    #[error("class {0} is not a (-1)-class")]
    NotMinusOneClass(String),
    #[error("degeneration parameters (k={k}, b={b}) out of bounds for d={d}, n={n}")]
    DegenerationBounds { k: i64, b: i64, d: i64, n: i64 },
    #[error("prime {prime} must exceed the degree {degree}")]
    PrimeTooSmall { prime: u64, degree: i64 },
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("negative multiplicity {0} in an interpolation problem")]
    NegativeMultiplicity(i64),
    #[error("recursion budget of {0} nodes exhausted")]
    BudgetExhausted(usize),
    #[error("cache file error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
