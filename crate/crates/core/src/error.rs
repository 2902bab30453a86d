use thiserror::Error;

/// Errors raised by the model, the solvers and the fan analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("invalid merge chain: {0}")]
    InvalidChain(String),

    #[error("invalid taxon set: {0}")]
    InvalidTaxa(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite dissimilarity at pair index {0}")]
    NonFinite(usize),

    #[error("levels are not nondecreasing at step {step}: {prev} > {next}")]
    NotUltrametric { step: usize, prev: f64, next: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("{what} supports at most {cap} taxa, got {n}")]
    Capacity {
        what: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("invalid witness parameters: need a < b, got a = {a}, b = {b}")]
    InvalidWitness { a: f64, b: f64 },

    #[error(transparent)]
    Parse(#[from] crate::io::ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
