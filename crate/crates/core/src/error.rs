//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the evaluation and simulation routines.
///
/// Callers that expose these to an operating system map [`Error::Domain`]
/// style misuse to a usage exit status and the resource-cap variants to a
/// dedicated cap exit status; see the CLI crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A quantity was outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Direct path enumeration was requested for more paths than the cap.
    #[error("path enumeration cap exceeded: C({total},{forward}) ~ 1e{log10_paths:.1} paths exceeds 1e{log10_cap:.0}")]
    EnumerationCap {
        total: u64,
        forward: u64,
        log10_paths: f64,
        log10_cap: f64,
    },

    /// The two-index recurrence table would exceed its cell cap.
    #[error("recurrence cap exceeded: {backward} x {forward} cells exceed {cap}")]
    RecurrenceCap {
        backward: u64,
        forward: u64,
        cap: u64,
    },

    /// A search bracket did not contain a maximum.
    #[error("bracket endpoints do not straddle a maximum")]
    Bracket,

    /// An operation defined for one step-size model was called with the other.
    #[error("operation requires the {required} step-size model")]
    WrongTauModel { required: &'static str },

    /// A matrix required to be Hermitian was not, within tolerance.
    #[error("matrix is not Hermitian: max |H - H^dagger| entry = {deviation:.3e}")]
    NotHermitian { deviation: f64 },
}
