//! Numerical thresholds, tolerances, and resource caps, in one place.
//!
//! Every inexact comparison made by this crate routes through a constant
//! defined here, so the tightness of the whole artifact can be audited at a
//! glance. The values are deliberately conservative: loosening one should be
//! a reviewed decision, not a local hotfix.

/// Operational meaning of "much less than" in asymptotic validity conditions.
///
/// A condition of the form `x << y` is scored as satisfied when
/// `x <= MUCH_LESS_RATIO * y`; the reverse `x >> y` requires
/// `x >= y / MUCH_LESS_RATIO`. The value 0.05 keeps every "approximately
/// bounded" claim made by [`crate::features::subsidiary_maxima`] accurate to
/// 10% over the full range it declares valid (at 0.1 the envelope estimate
/// for deep peaks with n = 50 drifts ~35% off). Shared by the feature and
/// regime modules.
pub const MUCH_LESS_RATIO: f64 = 0.05;

/// Product-form denominators smaller than this (in absolute value) are
/// treated as singular and the evaluation falls back to the recurrence,
/// which has only removable structure at those points.
pub const SINGULARITY_THRESHOLD: f64 = 1e-9;

/// Two predicted feature locations closer than this (absolute, in z) are
/// considered the same point when deduplicating.
pub const POINT_DEDUP_ABS: f64 = 1e-12;

/// Eigenvalues of the step-commutator closer than this, relative to the
/// spectral norm, are merged into one degenerate group.
pub const EIGEN_MERGE_REL: f64 = 1e-9;

/// Eigenvalues within this band around zero, relative to the spectral norm,
/// count as the zero eigenspace.
pub const ZERO_BAND_REL: f64 = 1e-9;

/// Maximum entrywise deviation |H - H^dagger| accepted as Hermitian,
/// relative to max(1, largest entry magnitude).
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Default tolerance on the overlap of the initial state with the zero
/// eigenspace of the step-commutator.
pub const OVERLAP_TOL: f64 = 1e-9;

/// Golden-section refinement stops once the bracket width shrinks below
/// `BRACKET_SHRINK_REL * pi / (N + 1)`, i.e. a fixed fraction of the local
/// feature spacing.
pub const BRACKET_SHRINK_REL: f64 = 1e-4;

/// Cap on the number of lattice paths the direct nested-sum evaluator will
/// enumerate: C(N, n) must not exceed this.
pub const SUM_PATH_CAP: f64 = 1e6;

/// Cap on the number of operator orderings the simulator will enumerate:
/// C(m + n, n) must not exceed this.
pub const ENUMERATION_PATH_CAP: f64 = 1e5;

/// Cap on `m * n`, the cell count of the two-index recurrence.
pub const RECURRENCE_CELL_CAP: u64 = 100_000_000;

/// Largest matrix dimension the simulator accepts.
pub const MAX_DIMENSION: usize = 16;

// Compile-time sanity: the separation ratio is a proper fraction, the dedup
// slack stays inside the singular-limit window, and the caps order by
// per-path cost (matrix enumeration < scalar sum < recurrence cells).
const _: () = {
    assert!(MUCH_LESS_RATIO > 0.0 && MUCH_LESS_RATIO < 1.0);
    assert!(SINGULARITY_THRESHOLD > 0.0 && SINGULARITY_THRESHOLD < 1e-6);
    assert!(POINT_DEDUP_ABS < SINGULARITY_THRESHOLD);
    assert!(BRACKET_SHRINK_REL < 1e-2);
    assert!(ENUMERATION_PATH_CAP < SUM_PATH_CAP);
    assert!((RECURRENCE_CELL_CAP as f64) > SUM_PATH_CAP);
};
