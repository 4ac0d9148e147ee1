use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Invalid parameters, mismatched dimensions, coordinate overflow.
    #[error("configuration error: {0}")]
    Config(String),

    /// The brute-force oracle refused to enumerate more paths than its cap.
    #[error("oracle infeasible: more than {cap} paths enumerated")]
    OracleInfeasible { cap: u64 },

    /// A Monte Carlo replicate failed; `seed` reproduces it.
    #[error("replicate {replicate} (seed {seed}) failed: {source}")]
    Replicate {
        replicate: usize,
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
