use thiserror::Error;

/// Everything that can go wrong across the factorization pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("tolerance must be finite and nonnegative (got {0})")]
    InvalidTolerance(f64),

    #[error("expected rank {expected}, found rank {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("cannot complete the zero vector to a basis")]
    ZeroVector,

    #[error("simplex is degenerate (vertex matrix is singular)")]
    DegenerateSimplex,

    #[error("simplex iteration limit of {0} pivots exceeded")]
    IterationLimit(usize),

    #[error("{matrix} has negative entry {value:e} at ({row}, {col})")]
    NegativeEntries {
        matrix: &'static str,
        row: usize,
        col: usize,
        value: f64,
    },

    #[error("row {row} of W0 maps to nonpositive scaling entry {value:e}")]
    DegenerateRow { row: usize, value: f64 },

    #[error("row {row} of Q^T is not the all-ones row (entry {value})")]
    NotNormalized { row: usize, value: f64 },

    #[error("polyhedron is empty")]
    EmptyPolyhedron,

    #[error("point set does not affinely span the ambient space")]
    DegenerateSpan,

    #[error("no position of the vertex keeps the point set covered")]
    CoverageInfeasible,

    #[error("solution structure mismatch: {0}")]
    StructureMismatch(String),

    #[error("{0} variables is too many for brute-force enumeration (limit 24)")]
    TooLarge(usize),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("intermediate simplex is undefined for k = 1 (the ambient space is R^0)")]
    ZeroDimensional,

    #[error("factorization failed verification: {0}")]
    VerificationFailed(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
