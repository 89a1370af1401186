use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum KoszulError {
    #[error("incomparable lengths: {left} vs {right}")]
    IncomparableLengths { left: usize, right: usize },

    #[error("no leading term: polynomial is zero")]
    NoLeadingTerm,

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("not in subspace")]
    NotInSubspace,

    #[error("confluence undetermined at k_max = {k_max}")]
    UndeterminedAtKMax { k_max: usize },

    #[error("representation identities violated for k = {k}")]
    RepresentationIdentities { k: usize },

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },

    #[error("input error: {0}")]
    Input(String),
}
