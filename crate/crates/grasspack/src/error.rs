use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Generator rows do not span an n-dimensional subspace.
    #[error("rank deficient generator: smallest singular value {smallest:.3e} < 1e-10 * largest {largest:.3e}")]
    RankDeficient { smallest: f64, largest: f64 },

    /// Two subspaces (or a subspace and an operation) disagree on (m, n).
    #[error("dimension mismatch: expected ({expected_m}, {expected_n}), got ({got_m}, {got_n})")]
    DimensionMismatch {
        expected_m: usize,
        expected_n: usize,
        got_m: usize,
        got_n: usize,
    },

    /// A pairwise distance fell on or below the potential pole A.
    #[error("potential pole crossed: pair ({i}, {j}) has distance {dist:.6e} <= A = {a:.6e}")]
    PoleCrossed { i: usize, j: usize, dist: f64, a: f64 },

    /// Binary code is not closed under complementation.
    #[error("binary code is not closed under complementation (word {word} has no complement in the code)")]
    NotComplementClosed { word: usize },

    /// Matrix fails the conference-matrix conditions.
    #[error("not a conference matrix: {reason}")]
    NotConferenceMatrix { reason: String },

    /// Malformed text input.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A generator block in a packing file drifted too far from orthonormality.
    #[error("plane {plane} is not orthonormal: row-product drift {drift:.3e} exceeds 1e-6")]
    NotOrthonormal { plane: usize, drift: f64 },

    /// Packing file body has the wrong number of rows.
    #[error("row count mismatch: header promises {expected} generator rows, file has {found}")]
    CountMismatch { expected: usize, found: usize },

    /// Argument outside the operation's domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
