use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix is rank deficient: rank {rank} but {required} independent rows are required")]
    RankDeficient { rank: usize, required: usize },

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("index {0} listed more than once")]
    DuplicateIndex(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("incompatible ensemble parameters: {0}")]
    IncompatibleEnsemble(String),

    #[error("could not remove parallel edges after {attempts} permutation attempts")]
    MultiEdgeRetriesExhausted { attempts: usize },

    #[error("alist parse error at line {line}: {message}")]
    Alist { line: usize, message: String },

    #[error("unerased symbols violate parity check {check}")]
    InconsistentObservation { check: usize },

    #[error("exhaustive enumeration refused: n = {n} exceeds the limit {limit} for this channel")]
    ExhaustiveLimit { n: usize, limit: usize },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} = {p} is not a probability in [0, 1]")))
    }
}
