//! Interference of forward and backward unitary evolution.
//!
//! A system that takes `N` elementary time steps, each of which may act with a
//! forward step operator `U_F = exp(-i tau H_F)` or a backward step operator
//! `U_B = exp(+i tau H_B)`, accumulates an equally weighted sum over all
//! orderings of the two. Grouping the orderings by the number `n` of forward
//! steps produces operator-valued coefficients `S_{N-n,n}`, and reordering each
//! coefficient into normal form leaves behind a scalar interference factor
//!
//! ```text
//! I_{m,n}(z) = sum_{v=0}^{m} ... sum_{k=0}^{l} exp[-i (v + ... + l + k) z]
//! ```
//!
//! with `n` nested summations and `z` the commutator phase per step pair.
//! This crate evaluates `I_{m,n}` three independent ways ([`interference`]),
//! derives its analytic features, zeros, unit-modulus points, subsidiary
//! maxima, peak widths ([`features`]), simulates the full operator sum for
//! small matrix models ([`toy`]), and evaluates the physical validity window
//! implied by the interference envelope ([`regime`]).
//!
//! The [`verify`] module packages the quantitative claims of the above into a
//! self-checking suite used by both the test harness and the CLI.

pub mod error;
pub mod features;
pub mod interference;
pub mod logcomplex;
pub mod regime;
pub mod tol;
pub mod toy;
pub mod verify;

pub use error::{Error, Result};
pub use interference::{PathCount, PhaseArg};
pub use logcomplex::LogComplex;
