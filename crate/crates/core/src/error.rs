use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("{0} is not an odd prime")]
    NotOddPrime(BigInt),
    #[error("modulus must be positive, got {0}")]
    NonPositiveModulus(BigInt),
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(BigInt, BigInt),
    #[error("no qualifying prime in [{start}, {cap}]")]
    SearchCapExceeded { start: u64, cap: u64 },
    #[error("constant polynomial where a non-constant one is required")]
    ConstantPolynomial,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("invalid trinomial: {0}")]
    InvalidTrinomial(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("value needs {bits} bits, over the budget of {budget}")]
    BitBudgetExceeded { bits: u64, budget: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("subgroup closure exceeded {0} elements")]
    ClosureCapExceeded(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("construction check failed: {0}")]
    Construction(String),
    #[error("only {found} good primes found below {cap}, {wanted} requested")]
    InsufficientPrimes { found: usize, wanted: usize, cap: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
