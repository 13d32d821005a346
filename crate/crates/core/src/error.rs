use rug::Integer;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("cannot parse sequence spec `{spec}`: {reason}")]
    SpecSyntax { spec: String, reason: String },

    #[error("{g} is not invertible modulo {m}")]
    NotInvertible { g: Integer, m: u64 },

    #[error("period support incomplete at period {period}: could not factor {cofactor}")]
    IncompleteSupport { period: u64, cofactor: Integer },

    #[error("sequence is not exponentially growing (dominant root {root})")]
    NotExponentiallyGrowing { root: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid covering system: {0}")]
    InvalidCovering(String),

    #[error("b-file line {line}: {reason}")]
    BFile { line: usize, reason: String },

    #[error("verdict log: {0}")]
    Log(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
