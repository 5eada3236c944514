//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // -- graph construction ------------------------------------------------
    #[error("edge {source:?} -> {target:?} has non-positive weight {weight}")]
    NonPositiveEdgeWeight {
        source: String,
        target: String,
        weight: f64,
    },
    #[error("vertex {name:?} has negative multiplicity {value}")]
    NegativeMultiplicity { name: String, value: f64 },
    #[error("total vertex multiplicity is zero; at least one vertex must have positive multiplicity")]
    ZeroTotalMultiplicity,
    #[error("duplicate edge {source:?} -> {target:?}")]
    DuplicateEdge { source: String, target: String },
    #[error("self-loop edge on vertex {name:?}")]
    SelfLoopEdge { name: String },
    #[error("unknown vertex name {name:?}")]
    UnknownVertexName { name: String },
    #[error("duplicate vertex name {name:?}")]
    DuplicateVertexName { name: String },
    #[error("vertex names must be nonempty")]
    EmptyVertexName,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex {name:?} appears in the vertex file but in no edge")]
    IsolatedVertex { name: String },

    // -- geodesics ---------------------------------------------------------
    #[error("graph is not strongly connected: no path from {from:?} to {to:?}")]
    NotStronglyConnected { from: String, to: String },
    #[error("operation requires at least {needed} vertices, graph has {got}")]
    DegenerateGraph { needed: usize, got: usize },

    // -- prominence --------------------------------------------------------
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("bisection failed to bracket the median membership boundary")]
    NoConvergence,

    // -- locality ----------------------------------------------------------
    #[error("neighborhood too small: ceil(alpha*n) = {size} < 2 for alpha = {alpha}, n = {n}")]
    NeighborhoodTooSmall { alpha: f64, n: usize, size: usize },
    #[error("locality level alpha must lie in (0, 1], got {alpha}")]
    InvalidAlpha { alpha: f64 },

    // -- analytics ---------------------------------------------------------
    #[error("input must be nonempty")]
    EmptyInput,
    #[error("correlation is undefined for constant input")]
    ConstantInput,
    #[error("input lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("operation requires at least {needed} values, got {got}")]
    TooFewValues { needed: usize, got: usize },
    #[error("multiscale profile has no uniform-margin columns")]
    MissingMargins,

    // -- ingest / file parsing ----------------------------------------------
    #[error("line {line}: malformed row: {message}")]
    MalformedRow { line: u64, message: String },
    #[error("line {line}: negative count {count}")]
    NegativeCount { line: u64, count: f64 },
    #[error("no flow records remain after filtering")]
    EmptyAfterFilter,
    #[error("required column {name:?} is missing from the header")]
    MissingColumn { name: String },
    #[error("malformed header: expected {expected:?}, found {found:?}")]
    MalformedHeader { expected: String, found: String },

    // -- I/O ----------------------------------------------------------------
    #[error("distance cache is corrupt: {message}")]
    CorruptCache { message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by unreadable or unparseable input rather than
    /// by the mathematical domain (used by the CLI to pick exit codes).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::MalformedRow { .. }
                | Error::NegativeCount { .. }
                | Error::MissingColumn { .. }
                | Error::MalformedHeader { .. }
                | Error::CorruptCache { .. }
                | Error::Io(_)
                | Error::Csv(_)
        )
    }
}
