//! End-to-end checks bundling the library's headline quantitative claims.
//!
//! Each check returns a [`CheckOutcome`] with a stable label, a pass flag,
//! and one human-readable detail line. The acceptance test target and the
//! CLI `verify` subcommand both route through these functions, so every
//! tolerance is pinned in exactly one place.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::features::{
    classify_at_root_of_unity, locate_extremum, peak_widths, principal_model_factor,
    relative_depth_at, root_of_unity_log_magnitude, subsidiary_maxima, subsidiary_model_factor,
    unit_modulus_points, zero_locations, RootOfUnityClass,
};
use crate::interference::{
    log_binomial, product_form, q_recursion, scaling_function_log, sum_oracle, PathCount,
};
use crate::regime::{
    required_fraction_for_duration, subsidiary_vs_width_ratio, upper_bound_total_time,
    validity_window, RegimeInputs, TauModel, PLANCK_TIME_S, SECONDS_PER_YEAR,
};
use crate::tol;
use crate::toy::{CVector, ToyUniverse};

/// Shared tolerance for cross-route agreement, relative to the larger
/// magnitude floored at one path's worth of amplitude.
pub const ORACLE_REL_TOL: f64 = 1e-9;
/// Relative tolerance on the closed-form central value against `C(N, n)`.
pub const CENTRAL_REL_TOL: f64 = 1e-9;
/// Depth budget for predicted zeros and deviation budget for predicted
/// unit-modulus points.
pub const POINT_TOL: f64 = 1e-6;
/// Relative tolerance on the first subsidiary peak's position and height.
pub const FIRST_PEAK_REL_TOL: f64 = 0.02;
/// Relative height tolerance for every peak inside the envelope's validity.
pub const VALID_PEAK_REL_TOL: f64 = 0.10;
/// Relative tolerance of the quadratic peak models over half their root.
pub const MODEL_REL_TOL: f64 = 0.05;
/// Absolute state-vector tolerance for the walk expansion identity.
pub const WALK_ABS_TOL: f64 = 1e-9;
/// Admissible range for the error ratio under step halving of a third-order
/// accurate approximation (ideal 8).
pub const ORDER_RATIO_RANGE: (f64, f64) = (6.4, 9.6);
/// Absolute matrix tolerance between the spectral and counted forms.
pub const SPECTRAL_ABS_TOL: f64 = 1e-9;
/// Relative tolerance on the rescaled first-peak position against `3 pi`.
pub const RESCALED_REL_TOL: f64 = 0.02;
/// Relative spread allowed for a quantity claimed independent of walk length.
pub const INDEPENDENCE_REL_TOL: f64 = 1e-12;

/// Result of one end-to-end check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub label: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(label: &'static str, passed: bool, detail: String) -> Self {
        CheckOutcome {
            label,
            passed,
            detail,
        }
    }
}

/// How much work the checks put in; `Quick` trims sample counts for
/// interactive use, `Full` runs the complete load.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Effort {
    Quick,
    Full,
}

/// Runs every check in order.
pub fn run(effort: Effort) -> Vec<CheckOutcome> {
    vec![
        check_oracle_agreement(effort),
        check_central_value(effort),
        check_zeros_and_unit_points(effort),
        check_subsidiary_peaks(effort),
        check_quadratic_models(effort),
        check_width_bound_estimates(effort),
        check_walk_expansion(effort),
        check_reordering_order(effort),
        check_spectral_equivalence(effort),
        check_zero_mode_condition(effort),
        check_duration_window(effort),
        check_rescaled_peak(effort),
    ]
}

fn rel_spread(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

/// All three evaluation routes agree on every small index pair at random
/// arguments. Disagreement is measured relative to the larger magnitude,
/// floored at 1 (one path's amplitude): near the deep zeros the brute-force
/// sum carries irreducible cancellation noise of order `C(N, n) * eps`,
/// which no route can undercut in doubles.
pub fn check_oracle_agreement(effort: Effort) -> CheckOutcome {
    let samples = match effort {
        Effort::Quick => 10,
        Effort::Full => 100,
    };
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut pairs = 0u64;
    let mut worst = 0.0f64;
    let mut worst_at = (0u64, 0u64, 0.0f64);
    for total in 0..=14u64 {
        for fwd in 0..=total {
            pairs += 1;
            let pc = PathCount::new(total, fwd).expect("valid split");
            for _ in 0..samples {
                let z: f64 = rng.random_range(1e-12..2.0 * PI);
                let s = sum_oracle(pc, z).expect("under enumeration cap");
                let r = q_recursion(pc, z).expect("under recurrence cap");
                let p = product_form(pc, z).expect("in domain").to_complex();
                for (a, b) in [(s, r), (s, p), (r, p)] {
                    let spread = rel_spread(a, b);
                    if spread > worst {
                        worst = spread;
                        worst_at = (total, fwd, z);
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let passed = worst <= ORACLE_REL_TOL && elapsed.as_secs_f64() < 30.0;
    CheckOutcome::new(
        "oracle agreement",
        passed,
        format!(
            "{pairs} index pairs x {samples} points: worst spread {worst:.2e} \
             (tol {ORACLE_REL_TOL:.0e}) at N={}, n={}, z={:.6}; {:.2?}",
            worst_at.0, worst_at.1, worst_at.2, elapsed
        ),
    )
}

/// The sine-product value at `z = 0` reproduces the binomial path count.
pub fn check_central_value(_effort: Effort) -> CheckOutcome {
    let mut worst = 0.0f64;
    for n in [1u64, 10, 50] {
        let pc = PathCount::new(8000, n).expect("valid split");
        let measured = product_form(pc, 0.0).expect("in domain").log_mag;
        let expected = log_binomial(8000, n).expect("in domain");
        // Relative error of the value equals the log difference to first order.
        worst = worst.max(((measured - expected).exp() - 1.0).abs());
    }
    CheckOutcome::new(
        "central value",
        worst <= CENTRAL_REL_TOL,
        format!("worst relative error {worst:.2e} over n in {{1,10,50}} at N=8000 (tol {CENTRAL_REL_TOL:.0e})"),
    )
}

/// Every predicted zero below `4 pi / n` vanishes relative to its immediate
/// neighborhood, and every predicted unit-modulus point evaluates to
/// magnitude 1.
///
/// Where a denominator factor of the sine product is singular, the rolling
/// recurrence is the only approximate route and its dynamic range cannot
/// resolve the depth at the largest sizes, so those points are certified by
/// the exact root-counting limit instead (which must agree that the value
/// is identically zero).
pub fn check_zeros_and_unit_points(effort: Effort) -> CheckOutcome {
    let totals: &[u64] = match effort {
        Effort::Quick => &[200, 2000],
        Effort::Full => &[200, 2000, 8000],
    };
    let mut worst_depth = 0.0f64;
    let mut worst_unity = 0.0f64;
    let mut zeros_checked = 0usize;
    let mut limit_certified = 0usize;
    let mut unity_checked = 0usize;
    let mut failures = 0usize;
    for &total in totals {
        for n in [1u64, 10, 50] {
            let pc = PathCount::new(total, n).expect("valid split");
            let z_max = 4.0 * PI / n as f64;
            let mut structured = 0usize;
            for q in 1..=n {
                let divisor = total + 1 - q;
                for j in 1.. {
                    let z = 2.0 * PI * j as f64 / divisor as f64;
                    if z > z_max {
                        break;
                    }
                    if classify_at_root_of_unity(pc, j, divisor) != RootOfUnityClass::Zero {
                        continue;
                    }
                    structured += 1;
                    zeros_checked += 1;
                    let depth = relative_depth_at(pc, z).expect("in domain");
                    if depth <= POINT_TOL {
                        worst_depth = worst_depth.max(depth);
                    } else {
                        // Approximate routes under-resolve here; the exact
                        // limit must confirm a true zero.
                        let exact = root_of_unity_log_magnitude(pc, j, divisor).expect("in domain");
                        if exact == f64::NEG_INFINITY {
                            limit_certified += 1;
                        } else {
                            failures += 1;
                        }
                    }
                }
            }
            // The structured sweep must cover at least the deduplicated list.
            let listed = zero_locations(pc, z_max).expect("in domain").len();
            if structured < listed {
                failures += 1;
            }
            let (ua, ub) = unit_modulus_points(pc, z_max).expect("n < N here");
            for &z in ua.iter().chain(ub.iter()) {
                unity_checked += 1;
                let mag = product_form(pc, z).expect("in domain").log_mag.exp();
                worst_unity = worst_unity.max((mag - 1.0).abs());
            }
        }
    }
    let passed = failures == 0 && worst_unity <= POINT_TOL;
    CheckOutcome::new(
        "zeros and unit-modulus points",
        passed,
        format!(
            "{zeros_checked} zeros (worst measurable depth {worst_depth:.2e}, \
             {limit_certified} certified by the exact limit), {unity_checked} unit points \
             (worst magnitude deviation {worst_unity:.2e}, tol {POINT_TOL:.0e}), \
             {failures} failures"
        ),
    )
}

/// Refined subsidiary peaks sit where predicted and match the envelope: the
/// first peak within 2% in position and height, every peak inside the
/// envelope's validity within 10% in height, and the documented height
/// overshoot at n = 50, m = 6 is real.
pub fn check_subsidiary_peaks(effort: Effort) -> CheckOutcome {
    let total = 8000u64;
    let spacing = PI / (total as f64 + 1.0);
    let mut worst_first_pos = 0.0f64;
    let mut worst_first_height = 0.0f64;
    let mut worst_valid = 0.0f64;
    let mut overshoot = 0.0f64;
    let mut peaks_checked = 0usize;
    for n in [1u64, 10, 50] {
        let pc = PathCount::new(total, n).expect("valid split");
        let mut peaks: Vec<_> = subsidiary_maxima(pc, 900)
            .into_iter()
            .filter(|p| p.bound_valid)
            .collect();
        if effort == Effort::Quick {
            peaks.truncate(12);
        }
        for p in peaks {
            peaks_checked += 1;
            let bracket = (p.position - spacing, p.position + spacing);
            let (z_peak, log_i) = locate_extremum(pc, bracket).expect("bracket holds a peak");
            // Height against the envelope at the same refined position.
            let height_ratio = (log_i - scaling_function_log(pc, z_peak).expect("in domain")).exp();
            worst_valid = worst_valid.max((height_ratio - 1.0).abs());
            if p.index == 1 {
                worst_first_pos = worst_first_pos.max((z_peak / p.position - 1.0).abs());
                worst_first_height = worst_first_height.max((height_ratio - 1.0).abs());
            }
            if n == 50 && p.index == 6 {
                overshoot = height_ratio;
            }
        }
    }
    let passed = worst_first_pos <= FIRST_PEAK_REL_TOL
        && worst_first_height <= FIRST_PEAK_REL_TOL
        && worst_valid <= VALID_PEAK_REL_TOL
        && overshoot > 1.0;
    CheckOutcome::new(
        "subsidiary peaks",
        passed,
        format!(
            "{peaks_checked} peaks at N=8000: first-peak position off by {worst_first_pos:.2e}, \
             height by {worst_first_height:.2e} (tol {FIRST_PEAK_REL_TOL}); worst in-validity \
             height error {worst_valid:.3} (tol {VALID_PEAK_REL_TOL}); n=50 m=6 height ratio \
             {overshoot:.4} (> 1 required)"
        ),
    )
}

/// The quadratic models reproduce the envelope-normalized magnitude within
/// 5% over half the model root, both at the origin and around the first
/// subsidiary peak.
pub fn check_quadratic_models(_effort: Effort) -> CheckOutcome {
    let total = 8000u64;
    let mut worst_principal = 0.0f64;
    let mut worst_subsidiary = 0.0f64;
    for n in [1u64, 10, 50] {
        let pc = PathCount::new(total, n).expect("valid split");
        let widths = peak_widths(pc).expect("interior split");
        let log_c = log_binomial(total, n).expect("in domain");
        for i in 0..=20 {
            let eps = widths.eps_principal / 2.0 * i as f64 / 20.0;
            let measured = product_form(pc, eps).expect("in domain").log_mag.exp();
            let model = log_c.exp() * principal_model_factor(pc, eps);
            worst_principal = worst_principal.max(((measured - model) / model).abs());
        }
        // Recenter on the refined peak: at n = 50 the true first peak sits
        // 2.4 subsidiary-roots above the nominal grid position, so an
        // uncentered quadratic would compare against the wrong lobe.
        let z1 = 3.0 * PI / (total as f64 + 1.0);
        let spacing = PI / (total as f64 + 1.0);
        let (z_peak, log_peak) =
            locate_extremum(pc, (z1 - spacing, z1 + spacing)).expect("bracket holds a peak");
        let y_peak = (log_peak - scaling_function_log(pc, z_peak).expect("in domain")).exp();
        for i in -20i64..=20 {
            let eps = widths.eps_subsidiary / 2.0 * i as f64 / 20.0;
            let z = z_peak + eps;
            let measured = (product_form(pc, z).expect("in domain").log_mag
                - scaling_function_log(pc, z).expect("in domain"))
            .exp();
            let model = y_peak * subsidiary_model_factor(pc, eps);
            worst_subsidiary = worst_subsidiary.max(((measured - model) / model).abs());
        }
    }
    let passed = worst_principal <= MODEL_REL_TOL && worst_subsidiary <= MODEL_REL_TOL;
    CheckOutcome::new(
        "quadratic peak models",
        passed,
        format!(
            "principal worst {worst_principal:.4}, subsidiary worst {worst_subsidiary:.4} \
             over half-root windows at N=8000, n in {{1,10,50}} (tol {MODEL_REL_TOL})"
        ),
    )
}

/// The closed-form peak widths against their advertised `1/(sqrt(k) N)`
/// estimates over random splits.
///
/// The subsidiary estimate's constant 2.8 sits below the exact coefficient
/// `sqrt(8) ~ 2.8284`, and `k (N+1) min(n,m) <= n m (N+1)` is not tight
/// enough to close the gap: `n (N-n) (N+1) < n N^2` for every interior n,
/// so the subsidiary inequality fails for every sample and this check
/// documents that discrepancy rather than hiding it.
pub fn check_width_bound_estimates(effort: Effort) -> CheckOutcome {
    let samples = match effort {
        Effort::Quick => 100,
        Effort::Full => 1000,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let mut principal_violations = 0usize;
    let mut subsidiary_violations = 0usize;
    let mut example = String::new();
    for _ in 0..samples {
        let total = rng.random_range(2..=10_000u64);
        let fwd = rng.random_range(1..total);
        let pc = PathCount::new(total, fwd).expect("interior split");
        let w = peak_widths(pc).expect("interior split");
        if w.eps_principal > w.bound_principal {
            principal_violations += 1;
        }
        if w.eps_subsidiary > w.bound_subsidiary {
            subsidiary_violations += 1;
            if example.is_empty() {
                example = format!(
                    "e.g. N={total}, n={fwd}: eps_sub {:.4e} > {:.4e}",
                    w.eps_subsidiary, w.bound_subsidiary
                );
            }
        }
    }
    let passed = principal_violations == 0 && subsidiary_violations == 0;
    CheckOutcome::new(
        "width bound estimates",
        passed,
        format!(
            "{principal_violations}/{samples} principal and {subsidiary_violations}/{samples} \
             subsidiary violations; {example}"
        ),
    )
}

/// Repeated application of `U_F + U_B` equals the sum over all step-count
/// splits of the literally enumerated operator sums.
pub fn check_walk_expansion(effort: Effort) -> CheckOutcome {
    let (seeds, max_steps) = match effort {
        Effort::Quick => (2u64, 6u64),
        Effort::Full => (5u64, 10u64),
    };
    let mut worst = 0.0f64;
    let mut cases = 0usize;
    for seed in 0..seeds {
        for dim in 1..=4usize {
            let uni = ToyUniverse::random(dim, 0.25, seed).expect("valid dims");
            for steps in 1..=max_steps {
                let state = uni
                    .symmetric_evolve(steps, false)
                    .expect("under step cap")
                    .state;
                let mut summed = CVector::zeros(dim);
                for n in 0..=steps {
                    let s = uni.enumerate_s(steps - n, n).expect("under path cap");
                    summed += s * uni.psi0();
                }
                worst = worst.max((state - summed).norm());
                cases += 1;
            }
        }
    }
    CheckOutcome::new(
        "walk expansion identity",
        worst <= WALK_ABS_TOL,
        format!("{cases} cases (d<=4, steps<=10): worst |difference| {worst:.2e} (tol {WALK_ABS_TOL:.0e})"),
    )
}

/// The commutator-reordered approximation is third-order accurate: halving
/// the step divides the error by about eight.
pub fn check_reordering_order(_effort: Effort) -> CheckOutcome {
    let taus = [0.2f64, 0.1, 0.05];
    let errs: Vec<f64> = taus
        .iter()
        .map(|&tau| {
            let uni = ToyUniverse::two_level_example(tau);
            let exact = uni.enumerate_s(2, 2).expect("under path cap");
            let approx = uni.reordered_s_approx(2, 2).expect("under path cap");
            (exact - approx).norm()
        })
        .collect();
    let ratios = [errs[0] / errs[1], errs[1] / errs[2]];
    let (lo, hi) = ORDER_RATIO_RANGE;
    let passed = ratios.iter().all(|&r| r >= lo && r <= hi);
    CheckOutcome::new(
        "reordering accuracy order",
        passed,
        format!(
            "halving ratios {:.2} and {:.2} for tau in {taus:?} (required within [{lo}, {hi}])",
            ratios[0], ratios[1]
        ),
    )
}

/// The eigenspace-weighted form reproduces the counted reordered sum.
pub fn check_spectral_equivalence(effort: Effort) -> CheckOutcome {
    let seeds: &[u64] = match effort {
        Effort::Quick => &[11],
        Effort::Full => &[11, 12, 13],
    };
    let mut worst = 0.0f64;
    let mut cases = 0usize;
    for &seed in seeds {
        for dim in 1..=4usize {
            let uni = ToyUniverse::random(dim, 0.2, seed).expect("valid dims");
            for total in 0..=8u64 {
                for fwd in 0..=total {
                    let spectral = uni.spectral_s(total - fwd, fwd).expect("small split");
                    let counted = uni
                        .reordered_s_approx(total - fwd, fwd)
                        .expect("under path cap");
                    worst = worst.max((spectral - counted).norm());
                    cases += 1;
                }
            }
        }
    }
    CheckOutcome::new(
        "spectral equivalence",
        worst <= SPECTRAL_ABS_TOL,
        format!("{cases} cases (d<=4, m+n<=8): worst |difference| {worst:.2e} (tol {SPECTRAL_ABS_TOL:.0e})"),
    )
}

/// Time-symmetric generators never satisfy the zero-mode condition, the
/// maximally asymmetric two-level example always does, and stronger per-step
/// phases suppress the interior of the walk monotonically.
pub fn check_zero_mode_condition(_effort: Effort) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut random_state = |dim: usize| -> CVector {
        CVector::from_fn(dim, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    };
    let mut symmetric_false = true;
    for seed in 0..3u64 {
        let base = ToyUniverse::random(3, 0.2, seed).expect("valid dims");
        let real_sym = base.h_forward().map(|v| Complex64::new(v.re, 0.0));
        let real_sym = (&real_sym + real_sym.transpose()) * Complex64::new(0.5, 0.0);
        for _ in 0..5 {
            let uni =
                ToyUniverse::new(real_sym.clone(), random_state(3), 0.2).expect("valid universe");
            symmetric_false &= !uni.nonzero_eigenvalue_condition(tol::OVERLAP_TOL);
        }
    }
    let mut asymmetric_true = true;
    let pauli = ToyUniverse::two_level_example(0.2);
    for _ in 0..5 {
        let uni = ToyUniverse::new(pauli.h_forward().clone(), random_state(2), 0.2)
            .expect("valid universe");
        asymmetric_true &= uni.nonzero_eigenvalue_condition(tol::OVERLAP_TOL);
    }
    let grid = [0.01f64, 0.0316, 0.1, 0.316, 1.0];
    let mut fractions = Vec::with_capacity(grid.len());
    for &g in &grid {
        // The example's commutator eigenvalues are +-1, so tau^2 lambda = g
        // at tau = sqrt(g).
        let uni = ToyUniverse::two_level_example(g.sqrt());
        let comps = uni
            .symmetric_evolve(10, true)
            .expect("under step cap")
            .components
            .expect("requested");
        let total: f64 = comps.iter().map(|c| c.norm_squared()).sum();
        let interior: f64 = comps[1..10].iter().map(|c| c.norm_squared()).sum();
        fractions.push(interior / total);
    }
    let monotone = fractions.windows(2).all(|w| w[1] <= w[0]);
    let passed = symmetric_false && asymmetric_true && monotone;
    CheckOutcome::new(
        "zero-mode condition and interior suppression",
        passed,
        format!(
            "symmetric generators all negative: {symmetric_false}; two-level example all \
             positive: {asymmetric_true}; interior fraction {:.6} -> {:.6} monotone: {monotone}",
            fractions.first().unwrap(),
            fractions.last().unwrap()
        ),
    )
}

/// The headline physical-duration numbers: sub-picosecond bound at full
/// budget, cosmological durations only below ~4e-61, the stringent window
/// always in conflict, and the relaxed floor pinned at 1e-17 s.
pub fn check_duration_window(_effort: Effort) -> CheckOutcome {
    let full = RegimeInputs::planck_fixed(1.0).expect("valid inputs");
    let upper = upper_bound_total_time(&full).expect("fixed model");
    let upper_ok = (1.5e-13..=2.5e-13).contains(&upper);
    let ten_gyr = 1e10 * SECONDS_PER_YEAR;
    let fraction = required_fraction_for_duration(PLANCK_TIME_S, ten_gyr).expect("in domain");
    let fraction_ok = (1e-61..=1e-60).contains(&fraction);
    let mut strict_conflicts = true;
    for f in [1.0, 1e-12, 1e-30] {
        let inputs = RegimeInputs::planck_fixed(f).expect("valid inputs");
        strict_conflicts &= validity_window(&inputs, true)
            .expect("fixed model")
            .conflict;
    }
    let relaxed = validity_window(&full, false).expect("fixed model");
    let lower_ok = relaxed.lower_s == 1e-17 && !relaxed.conflict;
    let passed = upper_ok && fraction_ok && strict_conflicts && lower_ok;
    CheckOutcome::new(
        "duration window numbers",
        passed,
        format!(
            "upper bound {upper:.3e} s at full budget; 10 Gyr needs fraction {fraction:.3e}; \
             stringent window conflicts: {strict_conflicts}; relaxed floor {:.0e} s",
            relaxed.lower_s
        ),
    )
}

/// After compressing the argument by `N + 1`, the first subsidiary peak
/// lands at `3 pi` for every walk length, and with square-root step scaling
/// the subsidiary-to-step-phase ratio is walk-length independent.
pub fn check_rescaled_peak(effort: Effort) -> CheckOutcome {
    let totals: &[u64] = match effort {
        Effort::Quick => &[1000],
        Effort::Full => &[1000, 2000, 4000],
    };
    let mut worst_pos = 0.0f64;
    for &total in totals {
        let pc = PathCount::new(total, 10).expect("valid split");
        let np1 = total as f64 + 1.0;
        let z1 = 3.0 * PI / np1;
        let spacing = PI / np1;
        let (z_peak, _) =
            locate_extremum(pc, (z1 - spacing, z1 + spacing)).expect("bracket holds a peak");
        worst_pos = worst_pos.max((z_peak * np1 / (3.0 * PI) - 1.0).abs());
    }
    let inputs = RegimeInputs::new(0.64, TauModel::Scaled { c: 3.0e-30 }).expect("valid inputs");
    let ratios: Vec<f64> = totals
        .iter()
        .map(|&n| subsidiary_vs_width_ratio(&inputs, n))
        .collect();
    let base = ratios[0];
    let spread = ratios
        .iter()
        .fold(0.0f64, |acc, &r| acc.max((r / base - 1.0).abs()));
    let passed = worst_pos <= RESCALED_REL_TOL && spread <= INDEPENDENCE_REL_TOL;
    CheckOutcome::new(
        "rescaled peak position",
        passed,
        format!(
            "first rescaled peak within {worst_pos:.2e} of 3 pi over N in {totals:?} \
             (tol {RESCALED_REL_TOL}); scaled-step ratio spread {spread:.2e} \
             (tol {INDEPENDENCE_REL_TOL:.0e})"
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_run_produces_all_outcomes() {
        let outcomes = run(Effort::Quick);
        assert_eq!(outcomes.len(), 12);
        let labels: Vec<_> = outcomes.iter().map(|o| o.label).collect();
        assert_eq!(labels.len(), 12);
        for o in &outcomes {
            assert!(!o.detail.is_empty(), "{} has no detail", o.label);
        }
    }
}
