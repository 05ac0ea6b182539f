use thiserror::Error;

/// Errors raised by the lattice, Chern calculus and vanishing engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid surface: genus {g} and invariant e = {e} must both be non-negative")]
    InvalidSurface { g: i64, e: i64 },
    #[error("ideal sheaf length must be non-negative, got {0}")]
    NegativeLength(i64),
    #[error("operation not supported for rank {rank} (limit {limit})")]
    UnsupportedRank { rank: i64, limit: i64 },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}
