use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A square root of a negative β₈/β₉, or a division by β₃ = 0 in the
    /// wavefunction factors. No real solution exists on this branch.
    #[error("branch error: {0}")]
    Branch(String),

    /// Truncated direct sum whose certified tail is larger than requested.
    #[error("direct sum with {cutoff} terms has tail bound {tail_bound:e}; use a cutoff of at least {suggested}")]
    Convergence {
        cutoff: usize,
        tail_bound: f64,
        suggested: usize,
    },

    #[error("root finding failed: {0}")]
    Root(String),

    /// Inconsistent request (e.g. a special case whose couplings do not vanish).
    #[error("usage error: {0}")]
    Usage(String),

    #[error("index {index} outside table of {len} entries")]
    Range { index: usize, len: usize },

    #[error("non-positive partition function Z = {z} at alpha_bar = {alpha_bar}")]
    Evaluation { alpha_bar: f64, z: f64 },

    #[error("sweep aborted at grid index {index}: {source}")]
    SweepPoint {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}
