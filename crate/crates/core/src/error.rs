use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    Instance(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("parameter out of range: {0}")]
    Param(String),

    #[error("no candidate primes: {0}")]
    NoPrimes(String),

    #[error("candidate pool exhausted after {rounds} rounds at m = {modulus}, stop threshold {stop}")]
    PoolExhausted { rounds: usize, modulus: u64, stop: u64 },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("malformed answer for query {query}: {message}")]
    MalformedAnswer { query: usize, message: String },

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("solver failed: {0}")]
    Solver(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
