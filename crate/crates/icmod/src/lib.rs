//! Index-coded modulation toolkit.
//!
//! A broadcast sender holds `n` one-bit messages and serves `m` receivers,
//! each demanding one message while already knowing a subset of the others.
//! A scalar linear index code compresses the `n` messages into `N` coded
//! bits, and those `N` bits are transmitted as a single point of a
//! 2^N-PSK or 2^N-QAM constellation instead of `N` separate BPSK symbols.
//!
//! The crate covers the full pipeline:
//!
//! * [`gf2`] — bit-packed linear algebra over GF(2)
//! * [`problem`] — problem ingestion, normalization, side-information graph
//! * [`minrank`] — exhaustive minrank solver and encoding-matrix extraction
//! * [`code`] — encoding, per-receiver code views, decodability checks
//! * [`constellation`] — PSK/QAM signal sets and set-partition trees
//! * [`labeling`] — priority mapping of codewords onto signal points
//! * [`analysis`] — effective minimum distances and coding gains
//! * [`sim`] — seeded Monte Carlo simulation with an N-fold BPSK baseline

pub mod analysis;
pub mod code;
pub mod constellation;
pub mod gf2;
pub mod labeling;
pub mod minrank;
pub mod problem;
pub mod sim;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("not a single-unicast problem: {0}")]
    NotSingleUnicast(String),

    #[error("invalid encoding matrix: {0}")]
    InvalidCode(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("invalid priority list: {0}")]
    BadPriorityList(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
