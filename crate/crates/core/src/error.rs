use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is not monic of degree {expected}")]
    BadModulusShape { expected: u32 },
    #[error("modulus is reducible over Z_{p}")]
    ReducibleModulus { p: u64 },
    #[error("inversion of zero in F_{{{p}^{n}}}")]
    ZeroInverse { p: u64, n: u32 },
    #[error("element with index {index} is not primitive")]
    NotPrimitive { index: usize },
    #[error("component function requires nonzero b")]
    ZeroComponent,
    #[error("size budget exceeded: {size} > {budget} (set PLATEAU_LAB_BUDGET to override)")]
    SizeBudget { size: usize, budget: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
