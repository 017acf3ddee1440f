use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("modulus {which} is not monic of degree {expected}")]
    BadModulus {
        which: &'static str,
        expected: usize,
    },
    #[error("modulus {which} is not irreducible")]
    NotIrreducible { which: &'static str },
    #[error("field of size {size} exceeds the census size guard {guard}")]
    SizeGuardExceeded { size: u128, guard: u128 },
    #[error("field too large for 64-bit order arithmetic")]
    FieldTooLarge,
    #[error("division by zero")]
    DivisionByZero,
    #[error("range [{lo}, {hi}) out of bounds for field of size {size}")]
    RangeOutOfBounds { lo: u64, hi: u64, size: u64 },
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error("{q} and {modulus} are not coprime")]
    NotCoprime { q: u64, modulus: u64 },
    #[error("characteristic {p} divides cyclotomic index {d}")]
    CharDividesIndex { p: u64, d: u64 },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("k-normality methods disagree: gcd={gcd} span={span} rank={rank} ord={ord}")]
    MethodDisagreement {
        gcd: usize,
        span: usize,
        rank: usize,
        ord: usize,
    },
    #[error("element is {0}-normal, not normal")]
    NotNormal(usize),
    #[error("{target} does not divide {group_order}")]
    NotADivisor { target: u64, group_order: u64 },
    #[error("census count {census} differs from formula count {formula} at k={k}")]
    FormulaCensusMismatch { k: usize, census: u64, formula: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
