//! The path-interference weight `I_{m,n}(z)` and its scaled forms.
//!
//! `I_{m,n}(z)` is the sum of `C(m+n, n)` unit phasors, one per interleaving
//! of `m` backward and `n` forward steps; the phase of each term is `z` times
//! the sum of a weakly decreasing index tuple. Three independent evaluation
//! routes are provided and cross-checked by the test suite:
//!
//! * [`sum_oracle`]: the defining nested sum, term by term (exponential cost,
//!   capped, used as ground truth);
//! * [`q_recursion`]: a two-index lattice recurrence costing `O(m * n)`;
//! * [`product_form`]: the closed sine-product form in log domain, the only
//!   route that survives `N = 8000` scans.
//!
//! The scaled forms divide out the envelope [`scaling_function`] so that all
//! peak heights are comparable to one.

use crate::error::{Error, Result};
use crate::logcomplex::LogComplex;
use crate::tol;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Rows of the recurrence table are renormalized once their largest entry
/// exceeds this, keeping far-from-overflow headroom (the entries can reach
/// C(m+n, n)).
const RESCALE_THRESHOLD: f64 = 1e150;

/// Step-count pair: `total` steps of which `forward` go forward; the
/// remaining `total - forward` go backward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathCount {
    total: u64,
    forward: u64,
}

impl PathCount {
    /// Errors unless `forward <= total`.
    pub fn new(total: u64, forward: u64) -> Result<Self> {
        if forward > total {
            return Err(Error::Domain(format!(
                "forward steps {forward} exceed total steps {total}"
            )));
        }
        Ok(PathCount { total, forward })
    }

    /// Builds from the (backward, forward) split.
    pub fn from_split(backward: u64, forward: u64) -> Self {
        let total = backward
            .checked_add(forward)
            .expect("step counts overflow u64");
        PathCount { total, forward }
    }

    pub fn total(self) -> u64 {
        self.total
    }

    pub fn forward(self) -> u64 {
        self.forward
    }

    pub fn backward(self) -> u64 {
        self.total - self.forward
    }

    /// The partner with forward and backward counts exchanged; the
    /// interference weight is invariant under this swap.
    pub fn swapped(self) -> Self {
        PathCount {
            total: self.total,
            forward: self.backward(),
        }
    }

    /// `ln C(total, forward)`: log of the number of step orderings.
    pub fn log_path_count(self) -> f64 {
        log_binomial(self.total, self.forward).expect("invariant: forward <= total")
    }
}

/// Dimensionless phase argument, optionally tagged with the time step and
/// rate it was derived from (`z = tau^2 * lambda`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseArg {
    z: f64,
    origin: Option<(f64, f64)>,
}

impl PhaseArg {
    pub fn new(z: f64) -> Self {
        PhaseArg { z, origin: None }
    }

    /// Phase accumulated over one step pair: `z = tau^2 * lambda`.
    pub fn from_time_step(tau: f64, lambda: f64) -> Self {
        PhaseArg {
            z: tau * tau * lambda,
            origin: Some((tau, lambda)),
        }
    }

    pub fn z(self) -> f64 {
        self.z
    }

    /// The `(tau, lambda)` pair this phase was derived from, if any.
    pub fn origin(self) -> Option<(f64, f64)> {
        self.origin
    }
}

impl From<f64> for PhaseArg {
    fn from(z: f64) -> Self {
        PhaseArg::new(z)
    }
}

fn finite_z(z: impl Into<PhaseArg>) -> Result<f64> {
    let z = z.into().z();
    if !z.is_finite() {
        return Err(Error::Domain(format!(
            "phase argument z = {z} is not finite"
        )));
    }
    Ok(z)
}

fn nonnegative_z(z: impl Into<PhaseArg>) -> Result<f64> {
    let z = finite_z(z)?;
    if z < 0.0 {
        return Err(Error::Domain(format!(
            "scaled evaluation requires z >= 0, got {z}"
        )));
    }
    Ok(z)
}

/// `ln C(total, choose)`.
///
/// For small `k = min(choose, total - choose)` the log-gamma difference
/// loses absolute precision (three ~N ln N terms cancelling down to ~k ln N),
/// so the ratio logs are summed directly there; the relative error is ~k
/// ulps either way.
pub fn log_binomial(total: u64, choose: u64) -> Result<f64> {
    if choose > total {
        return Err(Error::Domain(format!(
            "binomial index {choose} exceeds {total}"
        )));
    }
    let k = choose.min(total - choose);
    if k == 0 {
        return Ok(0.0);
    }
    if k <= 1000 {
        let mut acc = 0.0;
        for i in 1..=k {
            acc += (((total - k + i) as f64) / (i as f64)).ln();
        }
        return Ok(acc);
    }
    Ok(libm::lgamma((total + 1) as f64)
        - libm::lgamma((choose + 1) as f64)
        - libm::lgamma((total - choose + 1) as f64))
}

/// Ground-truth evaluation: the literal nested sum over all weakly
/// decreasing forward-position tuples, one phasor per step ordering.
///
/// Costs `C(total, forward)` terms; errors beyond [`tol::SUM_PATH_CAP`].
pub fn sum_oracle(pc: PathCount, z: impl Into<PhaseArg>) -> Result<Complex64> {
    let z = finite_z(z)?;
    let log_paths = pc.log_path_count();
    if log_paths > tol::SUM_PATH_CAP.ln() + 1e-9 {
        return Err(Error::EnumerationCap {
            total: pc.total(),
            forward: pc.forward(),
            log10_paths: log_paths / std::f64::consts::LN_10,
            log10_cap: tol::SUM_PATH_CAP.log10(),
        });
    }
    let m = pc.backward();
    let n = pc.forward() as usize;
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    // Odometer over weakly decreasing tuples t[0] >= t[1] >= ... >= t[n-1]
    // with entries in [0, m]; s tracks the running tuple sum.
    let mut tuple = vec![0u64; n];
    let mut s: u64 = 0;
    let mut acc = Complex64::new(0.0, 0.0);
    loop {
        acc += Complex64::cis(-(s as f64) * z);
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(acc);
            }
            let limit = if i == 1 { m } else { tuple[i - 2] };
            if tuple[i - 1] < limit {
                break;
            }
            i -= 1;
        }
        tuple[i - 1] += 1;
        s += 1;
        for t in &mut tuple[i..n] {
            s -= *t;
            *t = 0;
        }
    }
}

/// Lattice recurrence `I_{m,n} = I_{m,n-1} + e^{-inz} I_{m-1,n}` with
/// `I_{m,0} = I_{0,n} = 1`, evaluated bottom-up in `O(m * n)` with a rolling
/// row, returned in log form.
///
/// Rows are renormalized on the fly, so the result stays meaningful when the
/// central value C(m+n, n) overflows f64.
pub fn q_recursion_log(pc: PathCount, z: impl Into<PhaseArg>) -> Result<LogComplex> {
    let z = finite_z(z)?;
    let cols = pc.forward().min(pc.backward());
    let rows = pc.forward().max(pc.backward());
    if cols == 0 {
        return Ok(LogComplex::ONE);
    }
    if (cols as u128) * (rows as u128) > tol::RECURRENCE_CELL_CAP as u128 {
        return Err(Error::RecurrenceCap {
            backward: pc.backward(),
            forward: pc.forward(),
            cap: tol::RECURRENCE_CELL_CAP,
        });
    }
    let cols = cols as usize;
    let phases: Vec<Complex64> = (1..=cols)
        .map(|j| Complex64::cis(-(j as f64) * z))
        .collect();
    // row[j] holds I(r, j) * exp(-log_scale) for the current row index r.
    let mut row = vec![Complex64::new(1.0, 0.0); cols + 1];
    let mut log_scale = 0.0f64;
    for _ in 1..=rows {
        let mut left = Complex64::new((-log_scale).exp(), 0.0);
        for j in 1..=cols {
            let next = left + phases[j - 1] * row[j];
            row[j - 1] = left;
            left = next;
        }
        row[cols] = left;
        let max_sq = row.iter().map(|v| v.norm_sqr()).fold(0.0f64, f64::max);
        if max_sq > RESCALE_THRESHOLD * RESCALE_THRESHOLD {
            let max = max_sq.sqrt();
            for v in row.iter_mut() {
                *v /= max;
            }
            log_scale += max.ln();
        }
    }
    let last = row[cols];
    if last == Complex64::new(0.0, 0.0) {
        return Ok(LogComplex::ZERO);
    }
    Ok(LogComplex::new(last.norm().ln() + log_scale, last.arg()))
}

/// [`q_recursion_log`] converted to rectangular form; overflows above
/// `|I| ~ 1e308`, so large-N callers should stay with the log form.
pub fn q_recursion(pc: PathCount, z: impl Into<PhaseArg>) -> Result<Complex64> {
    Ok(q_recursion_log(pc, z)?.to_complex())
}

/// Closed-form evaluation in log domain:
///
/// `I = exp(-i n m z / 2) * prod_{q=1}^{k} sin((N+1-q) z/2) / sin(q z/2)`,
///
/// with `k = min(n, m)` (the product is invariant under the swap). Each
/// factor is real; magnitudes accumulate as logs and signs as multiples of
/// pi. Two guarded cases:
///
/// * a denominator within [`tol::SINGULARITY_THRESHOLD`] of a node makes the
///   factorization 0/0 there (the full function is finite); evaluation falls
///   back to [`q_recursion_log`], which is the only way this function can
///   error (table cap);
/// * otherwise a numerator within the same threshold of a node means `z`
///   sits within ~2e-9/(N+1-q) of a genuine zero of the whole function, and
///   the exact zero is returned.
pub fn product_form(pc: PathCount, z: impl Into<PhaseArg>) -> Result<LogComplex> {
    let z = finite_z(z)?;
    let k = pc.forward().min(pc.backward());
    if k == 0 {
        return Ok(LogComplex::ONE);
    }
    let total = pc.total() as f64;
    for q in 1..=k {
        let den = f64::sin(q as f64 * z / 2.0);
        if den.abs() < tol::SINGULARITY_THRESHOLD {
            return q_recursion_log(pc, z);
        }
    }
    let mut log_mag = 0.0f64;
    let mut negative_factors: u64 = 0;
    for q in 1..=k {
        let num = f64::sin((total + 1.0 - q as f64) * z / 2.0);
        if num.abs() < tol::SINGULARITY_THRESHOLD {
            return Ok(LogComplex::ZERO);
        }
        let den = f64::sin(q as f64 * z / 2.0);
        log_mag += num.abs().ln() - den.abs().ln();
        if (num < 0.0) != (den < 0.0) {
            negative_factors += 1;
        }
    }
    let n = pc.forward() as f64;
    let m = pc.backward() as f64;
    let phase = -n * m * z / 2.0 + PI * negative_factors as f64;
    Ok(LogComplex::new(log_mag, phase))
}

/// `ln F_{N,n}(z)`: the peak envelope. Equal to `ln C(N, n)` up to the first
/// zero spacing `2 pi / (N+1)`, and to `n ln(2/z) - ln(n!)` beyond it. The
/// jump at the branch point is inherent to the piecewise definition.
pub fn scaling_function_log(pc: PathCount, z: impl Into<PhaseArg>) -> Result<f64> {
    let z = nonnegative_z(z)?;
    if z <= 2.0 * PI / (pc.total() as f64 + 1.0) {
        log_binomial(pc.total(), pc.forward())
    } else {
        let n = pc.forward() as f64;
        Ok(n * (2.0 / z).ln() - libm::lgamma(n + 1.0))
    }
}

/// The envelope as a (real, phase-zero) log-domain value.
pub fn scaling_function(pc: PathCount, z: impl Into<PhaseArg>) -> Result<LogComplex> {
    Ok(LogComplex::new(scaling_function_log(pc, z)?, 0.0))
}

/// `Y = I / F` in log domain: every peak of `|Y|` is of order one, so the
/// result is representable even when `I` and `F` are astronomically large.
pub fn scaled_interference_log(pc: PathCount, z: impl Into<PhaseArg>) -> Result<LogComplex> {
    let z = nonnegative_z(z)?;
    let f = scaling_function_log(pc, z)?;
    Ok(product_form(pc, z)?.scale_log(-f))
}

/// [`scaled_interference_log`] in rectangular form.
pub fn scaled_interference(pc: PathCount, z: impl Into<PhaseArg>) -> Result<Complex64> {
    Ok(scaled_interference_log(pc, z)?.to_complex())
}

/// `Y` with the argument compressed by the number of steps:
/// `Y~(z) = Y(z / (N+1))`. Under the step scaling `tau = c / sqrt(N+1)` the
/// first subsidiary peak of `|Y~|` sits near `z = 3 pi` independent of `N`.
pub fn rescaled_interference(pc: PathCount, z: f64) -> Result<Complex64> {
    let z = nonnegative_z(z)?;
    scaled_interference(pc, z / (pc.total() as f64 + 1.0))
}

/// Log-domain form of [`rescaled_interference`].
pub fn rescaled_interference_log(pc: PathCount, z: f64) -> Result<LogComplex> {
    let z = nonnegative_z(z)?;
    scaled_interference_log(pc, z / (pc.total() as f64 + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, rel: f64) {
        let scale = a.norm().max(b.norm()).max(1.0);
        assert!(
            (a - b).norm() <= rel * scale,
            "values differ: {a} vs {b} (scale {scale})"
        );
    }

    #[test]
    fn path_count_split_roundtrip() {
        let pc = PathCount::new(12, 5).unwrap();
        assert_eq!(pc.backward(), 7);
        assert_eq!(PathCount::from_split(7, 5), pc);
        assert_eq!(pc.swapped().forward(), 7);
        assert!(PathCount::new(3, 4).is_err());
    }

    #[test]
    fn log_binomial_small_cases() {
        assert!((log_binomial(8000, 1).unwrap() - 8000f64.ln()).abs() < 1e-12 * 8000f64.ln());
        assert!((log_binomial(12, 6).unwrap() - 924f64.ln()).abs() < 1e-12 * 924f64.ln());
        assert_eq!(log_binomial(17, 0).unwrap(), 0.0);
        assert_eq!(log_binomial(17, 17).unwrap(), 0.0);
        assert!(log_binomial(5, 6).is_err());
    }

    #[test]
    fn log_binomial_precise_at_large_total() {
        // C(1e6, 3) fits exactly in integer arithmetic.
        let exact: u128 = 1_000_000u128 * 999_999 * 999_998 / 6;
        let want = (exact as f64).ln();
        assert!((log_binomial(1_000_000, 3).unwrap() - want).abs() < 1e-13 * want);
        // The two internal routes agree near the crossover.
        let a = log_binomial(5000, 1000).unwrap();
        let b = libm::lgamma(5001.0) - libm::lgamma(1001.0) - libm::lgamma(4001.0);
        assert!((a - b).abs() < 1e-11 * a);
    }

    #[test]
    fn sum_oracle_single_forward_step_expands_by_hand() {
        // One forward step among N total: I = sum_{k=0}^{m} e^{-ikz}.
        let z = 0.7;
        let got = sum_oracle(PathCount::new(2, 1).unwrap(), z).unwrap();
        let want = Complex64::new(1.0, 0.0) + Complex64::cis(-z);
        close(got, want, 1e-14);

        let z = 0.9;
        let got = sum_oracle(PathCount::from_split(2, 1), z).unwrap();
        let want = Complex64::new(1.0, 0.0) + Complex64::cis(-z) + Complex64::cis(-2.0 * z);
        close(got, want, 1e-14);
    }

    #[test]
    fn sum_oracle_no_forward_steps_is_one() {
        for z in [0.0, 1.3, -2.0, 11.0] {
            let got = sum_oracle(PathCount::new(9, 0).unwrap(), z).unwrap();
            close(got, Complex64::new(1.0, 0.0), 1e-15);
        }
    }

    #[test]
    fn sum_oracle_counts_paths_at_zero_phase() {
        let got = sum_oracle(PathCount::new(12, 6).unwrap(), 0.0).unwrap();
        close(got, Complex64::new(924.0, 0.0), 1e-12);
    }

    #[test]
    fn sum_oracle_rejects_huge_enumerations() {
        // C(40, 20) ~ 1.4e11 paths.
        let err = sum_oracle(PathCount::new(40, 20).unwrap(), 0.5).unwrap_err();
        assert!(matches!(err, Error::EnumerationCap { .. }), "got {err:?}");
    }

    #[test]
    fn recursion_matches_hand_expansion() {
        let z = 1.1;
        let got = q_recursion(PathCount::from_split(1, 1), z).unwrap();
        close(got, Complex64::new(1.0, 0.0) + Complex64::cis(-z), 1e-13);
        let got = q_recursion(PathCount::from_split(4, 0), z).unwrap();
        close(got, Complex64::new(1.0, 0.0), 1e-15);
        let got = q_recursion(PathCount::from_split(6, 6), 0.0).unwrap();
        close(got, Complex64::new(924.0, 0.0), 1e-12);
    }

    #[test]
    fn recursion_matches_sum_oracle_on_a_grid() {
        for (m, n) in [(3u64, 2u64), (5, 5), (1, 7), (8, 3)] {
            let pc = PathCount::from_split(m, n);
            for i in 0..20 {
                let z = -3.0 + 0.31 * i as f64;
                let a = sum_oracle(pc, z).unwrap();
                let b = q_recursion(pc, z).unwrap();
                close(a, b, 1e-11);
            }
        }
    }

    #[test]
    fn recursion_rejects_oversized_tables() {
        let err = q_recursion(PathCount::from_split(200_000, 1_000_000), 0.5).unwrap_err();
        assert!(matches!(err, Error::RecurrenceCap { .. }), "got {err:?}");
    }

    #[test]
    fn recursion_survives_magnitudes_beyond_f64() {
        // C(3000, 1500): ln ~ 2076, far beyond f64 range.
        let v = q_recursion_log(PathCount::new(3000, 1500).unwrap(), 0.0).unwrap();
        let want = log_binomial(3000, 1500).unwrap();
        assert!((v.log_mag - want).abs() < 1e-9 * want);
        assert!(v.phase.abs() < 1e-9);
    }

    #[test]
    fn product_form_central_value_is_path_count() {
        // z = 0 routes through the recurrence fallback (denominators vanish).
        let v = product_form(PathCount::new(8000, 1).unwrap(), 0.0).unwrap();
        assert!((v.log_mag - 8000f64.ln()).abs() < 1e-10);
        assert!(v.phase.abs() < 1e-12);
    }

    #[test]
    fn product_form_hits_exact_zero() {
        // One forward step in two: I(z) = 1 + e^{-iz}, zero at z = pi.
        let v = product_form(PathCount::new(2, 1).unwrap(), PI).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn product_form_matches_sum_oracle_at_generic_argument() {
        let pc = PathCount::new(12, 6).unwrap();
        let z = 0.37;
        let got = product_form(pc, z).unwrap().to_complex();
        let want = sum_oracle(pc, z).unwrap();
        close(got, want, 1e-10);
    }

    #[test]
    fn product_form_swap_invariance() {
        let z = 0.83;
        let a = product_form(PathCount::from_split(9, 4), z).unwrap();
        let b = product_form(PathCount::from_split(4, 9), z).unwrap();
        assert!((a.log_mag - b.log_mag).abs() < 1e-10);
        assert!((a.phase - b.phase).abs() < 1e-10);
    }

    #[test]
    fn envelope_branches() {
        let pc = PathCount::new(8000, 1).unwrap();
        assert!((scaling_function_log(pc, 0.0).unwrap() - 8000f64.ln()).abs() < 1e-12);
        // Past the branch point the n = 1 envelope is 2/z.
        let z1 = 3.0 * PI / 8001.0;
        let f = scaling_function_log(pc, z1).unwrap().exp();
        assert!((f - 2.0 / z1).abs() < 1e-12 * f);
        assert!((f - 1698.0).abs() < 1.0);
        // n = 0 envelope is identically one past the branch point.
        let pc0 = PathCount::new(40, 0).unwrap();
        assert_eq!(scaling_function_log(pc0, 1.0).unwrap(), 0.0);
        assert!(scaling_function_log(pc, -0.1).is_err());
    }

    #[test]
    fn scaled_interference_normalizes_the_origin() {
        let y = scaled_interference(PathCount::new(8000, 50).unwrap(), 0.0).unwrap();
        close(y, Complex64::new(1.0, 0.0), 1e-9);
    }

    #[test]
    fn scaled_interference_vanishes_at_first_zero() {
        let y = scaled_interference(PathCount::new(8000, 1).unwrap(), 2.0 * PI / 8000.0).unwrap();
        assert!(y.norm() <= 1e-6);
    }

    #[test]
    fn scaled_interference_first_peak_near_unity() {
        let y = scaled_interference(PathCount::new(8000, 1).unwrap(), 3.0 * PI / 8001.0).unwrap();
        assert!((y.norm() - 1.0).abs() < 0.05, "|Y| = {}", y.norm());
    }

    #[test]
    fn rescaled_interference_normalizes_the_origin() {
        let y = rescaled_interference(PathCount::new(1000, 10).unwrap(), 0.0).unwrap();
        close(y, Complex64::new(1.0, 0.0), 1e-9);
        assert!(rescaled_interference(PathCount::new(1000, 10).unwrap(), -1.0).is_err());
    }

    #[test]
    fn phase_arg_records_origin() {
        let p = PhaseArg::from_time_step(0.2, 3.0);
        assert!((p.z() - 0.12).abs() < 1e-15);
        assert_eq!(p.origin(), Some((0.2, 3.0)));
        let q: PhaseArg = 0.5.into();
        assert_eq!(q.z(), 0.5);
        assert!(q.origin().is_none());
    }

    #[test]
    fn non_finite_arguments_are_rejected() {
        let pc = PathCount::new(4, 2).unwrap();
        assert!(sum_oracle(pc, f64::NAN).is_err());
        assert!(product_form(pc, f64::INFINITY).is_err());
    }
}
