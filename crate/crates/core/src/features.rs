//! Analytic features of `|I_{N-n,n}(z)|`: zero and unit-modulus locations,
//! subsidiary maxima with their envelope bound, quadratic peak models, peak
//! widths, and numerical peak refinement.
//!
//! The candidate zero and unity grids follow from the sine-product
//! factorization, but a candidate is only genuine when no other factor
//! compensates it. At `z = 2 pi j / d` (reduced) the function value is fixed
//! exactly by residue arithmetic on the step counts, so candidates are
//! classified exactly rather than by numerical thresholding:
//!
//! * `I = 0` iff `N mod d < n mod d`;
//! * otherwise `|I| = C(floor(N/d), floor(n/d))`, which is 1 iff
//!   `floor(n/d)` is 0 or `floor(N/d)`.

use crate::error::{Error, Result};
use crate::interference::{log_binomial, product_form, scaled_interference_log, PathCount};
use crate::tol;
use std::f64::consts::PI;

/// One predicted subsidiary maximum of `|I|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsidiaryMax {
    /// Peak index `m >= 1`.
    pub index: u64,
    /// Predicted position `z_m = (2m+1) pi / (N+1)`.
    pub position: f64,
    /// Log of the envelope estimate `(1/n!) (2/z_m)^n` for the peak height.
    pub bound_log_mag: f64,
    /// Whether `z_m` is far enough inside `4 pi / n` for the estimate to be
    /// trusted (see [`tol::MUCH_LESS_RATIO`]).
    pub bound_valid: bool,
}

/// Peak half-widths (roots of the quadratic models) and their closed-form
/// scale estimates `~1/(sqrt(k) N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakWidths {
    pub eps_principal: f64,
    pub eps_subsidiary: f64,
    pub bound_principal: f64,
    pub bound_subsidiary: f64,
}

/// Everything the analysis predicts about `|I|` below `z_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureReport {
    pub zeros: Vec<f64>,
    pub unity_points_a: Vec<f64>,
    pub unity_points_b: Vec<f64>,
    pub subsidiary: Vec<SubsidiaryMax>,
    /// Absent when `n` is 0 or `N` (no interior peaks to measure).
    pub widths: Option<PeakWidths>,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact value class of `I` at `z = 2 pi j / divisor`: `Zero`, `UnitModulus`,
/// or neither.
///
/// The `Zero` verdict is valid for any divisor. The `UnitModulus` verdict
/// relies on the reduced-residue factor having unit modulus, which holds on
/// the two grids used here (`divisor = N+1` gives residue `N mod d = d-1`,
/// `divisor = N-n` gives `N mod d = n mod d`) but not for arbitrary points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RootOfUnityClass {
    Zero,
    UnitModulus,
    Other,
}

pub(crate) fn classify_at_root_of_unity(pc: PathCount, j: u64, divisor: u64) -> RootOfUnityClass {
    let d = divisor / gcd(j, divisor);
    if d == 1 {
        // Full period: the central value C(N, n) again.
        return if pc.forward() == 0 || pc.forward() == pc.total() {
            RootOfUnityClass::UnitModulus
        } else {
            RootOfUnityClass::Other
        };
    }
    let (total, fwd) = (pc.total(), pc.forward());
    if total % d < fwd % d {
        return RootOfUnityClass::Zero;
    }
    let (a, b) = (total / d, fwd / d);
    if b == 0 || b == a {
        RootOfUnityClass::UnitModulus
    } else {
        RootOfUnityClass::Other
    }
}

fn positive_z_max(z_max: f64) -> Result<()> {
    // Rejecting non-finite values also keeps the grid loops bounded.
    if !(z_max.is_finite() && z_max > 0.0) {
        return Err(Error::Domain(format!(
            "z_max must be positive and finite, got {z_max}"
        )));
    }
    Ok(())
}

/// Genuine zeros of `I` in `(0, z_max]`, sorted ascending.
///
/// Candidates are `z = 2 j pi / (N+1-q)` for `q = 1..n`; candidates where a
/// compensating denominator factor keeps `I` finite and nonzero (e.g.
/// N = 200, n = 50, z = pi/25, where `|I| = 4`) are excluded by the exact
/// residue classification.
pub fn zero_locations(pc: PathCount, z_max: f64) -> Result<Vec<f64>> {
    positive_z_max(z_max)?;
    let mut zs: Vec<f64> = Vec::new();
    for q in 1..=pc.forward() {
        let divisor = pc.total() + 1 - q;
        let mut j = 1u64;
        loop {
            let z = 2.0 * PI * j as f64 / divisor as f64;
            if z > z_max {
                break;
            }
            if classify_at_root_of_unity(pc, j, divisor) == RootOfUnityClass::Zero {
                zs.push(z);
            }
            j += 1;
        }
    }
    zs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    zs.dedup_by(|a, b| (*a - *b).abs() < tol::POINT_DEDUP_ABS);
    Ok(zs)
}

/// Points in `(0, z_max]` where `|I| = 1` exactly, as the two closed-form
/// families: A on the grid `2 j pi / (N+1)`, B on `2 j pi / (N-n)`. Grid
/// points where the exact value is not unit modulus (possible when the
/// reduced denominator drops below `n`) are excluded.
pub fn unit_modulus_points(pc: PathCount, z_max: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    positive_z_max(z_max)?;
    if pc.forward() == pc.total() && pc.forward() > 0 {
        return Err(Error::Domain(
            "all-forward paths have no backward-count grid (N - n = 0)".into(),
        ));
    }
    let family = |divisor: u64| -> Vec<f64> {
        let mut pts = Vec::new();
        let mut j = 1u64;
        loop {
            let z = 2.0 * PI * j as f64 / divisor as f64;
            if z > z_max {
                break;
            }
            if classify_at_root_of_unity(pc, j, divisor) == RootOfUnityClass::UnitModulus {
                pts.push(z);
            }
            j += 1;
        }
        pts
    };
    Ok((family(pc.total() + 1), family(pc.total() - pc.forward())))
}

/// Log-magnitude of `I` exactly at `z = 2 pi j / divisor`, via the analytic
/// limit of the sine product.
///
/// At such points individual denominator factors `sin(q z / 2)` may vanish;
/// `I` itself stays finite because a numerator factor vanishes alongside each
/// of them (`I` is a polynomial in `e^{-iz}`). Each matched root pair
/// contributes the ratio of the factors' linear coefficients, so the limit
/// comes out in closed form with no floating-point cancellation. Returns
/// `f64::NEG_INFINITY` when the numerator carries more roots than the
/// denominator, i.e. at an exact zero of `I`.
pub fn root_of_unity_log_magnitude(pc: PathCount, j: u64, divisor: u64) -> Result<f64> {
    if divisor == 0 {
        return Err(Error::Domain("divisor must be positive".into()));
    }
    let k = pc.forward().min(pc.backward());
    let np1 = pc.total() + 1;
    let mut log_mag = 0.0f64;
    let mut num_roots = 0u64;
    let mut den_roots = 0u64;
    // Factor sin(c z / 2) has argument pi (j c / divisor): a root iff
    // divisor | j c, otherwise reduce the argument modulo 2 pi exactly in
    // integer arithmetic before taking the sine.
    for q in 1..=k {
        for (coeff, numerator_side) in [(np1 - q, true), (q, false)] {
            let prod = j as u128 * coeff as u128;
            let sign = if numerator_side { 1.0 } else { -1.0 };
            if prod.is_multiple_of(divisor as u128) {
                if numerator_side {
                    num_roots += 1;
                } else {
                    den_roots += 1;
                }
                log_mag += sign * (coeff as f64).ln();
            } else {
                let r = (prod % (2 * divisor as u128)) as f64;
                log_mag += sign * (PI * r / divisor as f64).sin().abs().ln();
            }
        }
    }
    if num_roots > den_roots {
        return Ok(f64::NEG_INFINITY);
    }
    debug_assert_eq!(num_roots, den_roots, "sine product cannot have a pole");
    Ok(log_mag)
}

/// Quadratic curvature scale shared by both peak models:
/// `K = n (N-n) (N+1)`.
fn curvature(pc: PathCount) -> f64 {
    pc.forward() as f64 * pc.backward() as f64 * (pc.total() as f64 + 1.0)
}

/// The first `m_max` subsidiary maxima with a custom strictness for the
/// validity condition `z_m << 4 pi / n`.
pub fn subsidiary_maxima_with_threshold(
    pc: PathCount,
    m_max: u64,
    much_less_ratio: f64,
) -> Vec<SubsidiaryMax> {
    let n = pc.forward() as f64;
    let total = pc.total() as f64;
    (1..=m_max)
        .map(|m| {
            let position = (2.0 * m as f64 + 1.0) * PI / (total + 1.0);
            let bound_log_mag = n * (2.0 / position).ln() - libm::lgamma(n + 1.0);
            let bound_valid = if pc.forward() == 0 {
                true
            } else {
                position <= much_less_ratio * 4.0 * PI / n
            };
            SubsidiaryMax {
                index: m,
                position,
                bound_log_mag,
                bound_valid,
            }
        })
        .collect()
}

/// The first `m_max` subsidiary maxima: positions `(2m+1) pi / (N+1)`, the
/// envelope estimate of the peak height, and whether the estimate is
/// trustworthy at that distance from the origin.
pub fn subsidiary_maxima(pc: PathCount, m_max: u64) -> Vec<SubsidiaryMax> {
    subsidiary_maxima_with_threshold(pc, m_max, tol::MUCH_LESS_RATIO)
}

fn require_interior(pc: PathCount) -> Result<()> {
    if pc.forward() == 0 || pc.forward() == pc.total() {
        return Err(Error::Domain(format!(
            "peak structure requires 1 <= n <= N-1, got n = {} of N = {}",
            pc.forward(),
            pc.total()
        )));
    }
    Ok(())
}

/// Ratio of the principal-peak quadratic model to its `z = 0` value:
/// `1 - eps^2 K / 24`.
pub fn principal_model_factor(pc: PathCount, eps: f64) -> f64 {
    1.0 - eps * eps * curvature(pc) / 24.0
}

/// Quadratic model of the principal maximum: `C(N,n) [1 - eps^2 K / 24]`.
/// Meaningful for `|eps|` up to about half the first zero spacing.
pub fn quadratic_model_principal(pc: PathCount, eps: f64) -> Result<f64> {
    let log_c = log_binomial(pc.total(), pc.forward())?;
    Ok(log_c.exp() * principal_model_factor(pc, eps))
}

/// Ratio of the subsidiary-peak quadratic model to its on-peak value:
/// `1 - eps^2 K / 8`.
pub fn subsidiary_model_factor(pc: PathCount, eps: f64) -> f64 {
    1.0 - eps * eps * curvature(pc) / 8.0
}

/// Quadratic model of the `m`-th subsidiary maximum:
/// `(1/n!) (2/z_m)^n [1 - eps^2 K / 8]` with `eps` measured from `z_m`.
pub fn quadratic_model_subsidiary(pc: PathCount, m: u64, eps: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("subsidiary index m starts at 1".into()));
    }
    let z_m = (2.0 * m as f64 + 1.0) * PI / (pc.total() as f64 + 1.0);
    let n = pc.forward() as f64;
    let bound_log = n * (2.0 / z_m).ln() - libm::lgamma(n + 1.0);
    Ok(bound_log.exp() * subsidiary_model_factor(pc, eps))
}

/// Half-widths of the principal and subsidiary peaks (the roots of the
/// quadratic models) together with the closed-form scale estimates.
///
/// The estimates are reported, not asserted: `sqrt(8) > 2.8`, so
/// `eps_subsidiary` always lands slightly above `bound_subsidiary`, and the
/// principal estimate is exceeded as well once `n` is a sizable fraction
/// of `N`.
pub fn peak_widths(pc: PathCount) -> Result<PeakWidths> {
    require_interior(pc)?;
    let k = curvature(pc);
    let least = pc.forward().min(pc.backward()) as f64;
    let total = pc.total() as f64;
    Ok(PeakWidths {
        eps_principal: (24.0 / k).sqrt(),
        eps_subsidiary: (8.0 / k).sqrt(),
        bound_principal: 4.9 / (least.sqrt() * total),
        bound_subsidiary: 2.8 / (least.sqrt() * total),
    })
}

/// Golden-section refinement of a peak of the scaled magnitude `|Y|` inside
/// `bracket`; returns the refined position and `ln |I|` there.
///
/// `|Y|` rather than raw `|I|` is maximized: the falling envelope skews raw
/// `|I|` peaks several percent toward the origin (for n = 1 the first raw
/// peak sits at the root of `tan u = u`, ~4.5% below `3 pi / (N+1)`), while
/// the `|Y|` peaks sit where the peak-position predictions point.
pub fn locate_extremum(pc: PathCount, bracket: (f64, f64)) -> Result<(f64, f64)> {
    let (a0, b0) = bracket;
    if !(a0.is_finite() && b0.is_finite() && a0 > 0.0 && b0 > a0) {
        return Err(Error::Domain(format!(
            "bracket must satisfy 0 < a < b, got ({a0}, {b0})"
        )));
    }
    let eval = |z: f64| -> Result<f64> { Ok(scaled_interference_log(pc, z)?.log_mag) };
    let mid0 = 0.5 * (a0 + b0);
    let (fa0, fm0, fb0) = (eval(a0)?, eval(mid0)?, eval(b0)?);
    if fa0 > fm0 && fb0 > fm0 {
        return Err(Error::Bracket);
    }
    let tol_z = tol::BRACKET_SHRINK_REL * PI / (pc.total() as f64 + 1.0);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a0, b0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    while b - a > tol_z {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval(x1)?;
        }
    }
    let z_peak = 0.5 * (a + b);
    Ok((z_peak, product_form(pc, z_peak)?.log_mag))
}

/// How deep `|I|` dips at `z` compared to its immediate neighborhood:
/// `|I(z)| / max(|I(z - h)|, |I(z + h)|)` with `h = pi/(N+1)` (half the peak
/// spacing), computed in log domain. A genuine zero scores ~1e-12 or exact 0;
/// values near 1 mean no dip at all.
pub fn relative_depth_at(pc: PathCount, z: f64) -> Result<f64> {
    let h = PI / (pc.total() as f64 + 1.0);
    let at = product_form(pc, z)?;
    if at.is_zero() {
        return Ok(0.0);
    }
    let lo = product_form(pc, (z - h).max(0.0))?;
    let hi = product_form(pc, z + h)?;
    let scale = lo.log_mag.max(hi.log_mag);
    Ok((at.log_mag - scale).exp())
}

/// Full analytic summary below `z_max` with the first `m_max` subsidiary
/// maxima.
pub fn feature_report(pc: PathCount, z_max: f64, m_max: u64) -> Result<FeatureReport> {
    let zeros = if pc.forward() == 0 {
        Vec::new()
    } else {
        zero_locations(pc, z_max)?
    };
    let (unity_points_a, unity_points_b) = if pc.forward() == pc.total() && pc.forward() > 0 {
        (Vec::new(), Vec::new())
    } else {
        unit_modulus_points(pc, z_max)?
    };
    let subsidiary = if pc.forward() == 0 {
        Vec::new()
    } else {
        subsidiary_maxima(pc, m_max)
            .into_iter()
            .filter(|s| s.position <= z_max)
            .collect()
    };
    let widths = peak_widths(pc).ok();
    Ok(FeatureReport {
        zeros,
        unity_points_a,
        unity_points_b,
        subsidiary,
        widths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interference::q_recursion;

    #[test]
    fn zeros_for_single_forward_step() {
        let pc = PathCount::new(8000, 1).unwrap();
        let zs = zero_locations(pc, 0.01).unwrap();
        assert_eq!(zs.len(), 12); // 2 j pi / 8000 <= 0.01 for j = 1..12
        assert!((zs[0] - 2.0 * PI / 8000.0).abs() < 1e-18);

        let zs = zero_locations(PathCount::new(2, 1).unwrap(), 4.0).unwrap();
        assert_eq!(zs, vec![PI]);

        assert!(zero_locations(PathCount::new(5, 2).unwrap(), 0.0).is_err());
        assert!(zero_locations(PathCount::new(9, 0).unwrap(), 1.0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn compensated_zero_candidates_are_excluded() {
        // N = 200, n = 50: the grid point z = pi/25 (j = 4 on divisor 200)
        // reduces to denominator 50, where both step counts have residue 0;
        // the exact value there is C(4, 1) = 4, not 0.
        let pc = PathCount::new(200, 50).unwrap();
        let fake = PI / 25.0;
        let zs = zero_locations(pc, 0.26).unwrap();
        assert!(zs.iter().all(|&z| (z - fake).abs() > 1e-6));
        assert!(!zs.is_empty());
        let v = q_recursion(pc, fake).unwrap();
        assert!((v.norm() - 4.0).abs() < 1e-6, "|I| = {}", v.norm());
        // Every kept zero really dips far below its neighborhood.
        for &z in &zs {
            let depth = relative_depth_at(pc, z).unwrap();
            assert!(depth <= 1e-6, "depth at {z} is {depth}");
        }
        // At a scale the O(m n) recurrence resolves, cross-check kept zeros
        // by the independent route.
        let pc10 = PathCount::new(200, 10).unwrap();
        for &z in zero_locations(pc10, 0.26).unwrap().iter().take(4) {
            let v = q_recursion(pc10, z).unwrap();
            let lo = q_recursion(pc10, z - PI / 201.0).unwrap();
            let hi = q_recursion(pc10, z + PI / 201.0).unwrap();
            let scale = lo.norm().max(hi.norm());
            assert!(
                v.norm() <= 1e-6 * scale,
                "|I({z})| = {} vs {scale}",
                v.norm()
            );
        }
    }

    #[test]
    fn unity_grids_start_at_the_documented_points() {
        let pc = PathCount::new(8000, 50).unwrap();
        let (a, b) = unit_modulus_points(pc, 0.01).unwrap();
        assert!((a[0] - 2.0 * PI / 8001.0).abs() < 1e-18);
        assert!((b[0] - 2.0 * PI / 7950.0).abs() < 1e-18);

        let pc10 = PathCount::new(8000, 10).unwrap();
        let v = product_form(pc10, 2.0 * PI / 8001.0).unwrap();
        assert!(v.log_mag.abs() < 1e-6, "log|I| = {}", v.log_mag);

        assert!(unit_modulus_points(PathCount::new(4, 4).unwrap(), 1.0).is_err());
    }

    #[test]
    fn degenerate_unity_candidates_are_excluded() {
        // N = 2000, n = 50: grid point j = 69 on divisor 2001 reduces to
        // denominator 29 < 50 and the exact value is C(68, 1) = 68.
        let pc = PathCount::new(2000, 50).unwrap();
        let fake = 2.0 * PI * 69.0 / 2001.0;
        let (a, _) = unit_modulus_points(pc, 0.26).unwrap();
        assert!(a.iter().all(|&z| (z - fake).abs() > 1e-9));
        assert!(a.iter().any(|&z| (z - 2.0 * PI / 2001.0).abs() < 1e-15));
        let v = product_form(pc, fake).unwrap();
        assert!(
            (v.log_mag.exp() - 68.0).abs() < 1e-3,
            "|I| = {}",
            v.log_mag.exp()
        );
    }

    #[test]
    fn subsidiary_positions_and_bounds() {
        let pc = PathCount::new(8000, 1).unwrap();
        let subs = subsidiary_maxima(pc, 3);
        assert_eq!(subs.len(), 3);
        assert!((subs[0].position - 3.0 * PI / 8001.0).abs() < 1e-18);
        let z1 = subs[0].position;
        assert!((subs[0].bound_log_mag - (2.0 / z1).ln()).abs() < 1e-12);
        assert!(subs[0].bound_valid);

        // n = 50: the validity condition z_m <= 0.05 * 4 pi / 50 cuts off
        // between m = 15 and m = 16.
        let subs = subsidiary_maxima(PathCount::new(8000, 50).unwrap(), 20);
        assert!(subs[14].bound_valid);
        assert!(!subs[15].bound_valid);
    }

    #[test]
    fn widths_follow_the_curvature() {
        let pc = PathCount::new(8000, 10).unwrap();
        let w = peak_widths(pc).unwrap();
        let k: f64 = 10.0 * 7990.0 * 8001.0;
        assert!((w.eps_principal - (24.0 / k).sqrt()).abs() < 1e-18);
        assert!((w.eps_subsidiary - (8.0 / k).sqrt()).abs() < 1e-18);
        assert!((w.eps_subsidiary / w.eps_principal - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((w.bound_principal - 4.9 / (10f64.sqrt() * 8000.0)).abs() < 1e-18);

        let swapped = peak_widths(pc.swapped()).unwrap();
        assert_eq!(w, swapped);
        assert!(peak_widths(PathCount::new(5, 0).unwrap()).is_err());
        assert!(peak_widths(PathCount::new(5, 5).unwrap()).is_err());
    }

    #[test]
    fn quadratic_models_at_their_anchors() {
        let pc = PathCount::new(8000, 10).unwrap();
        let w = peak_widths(pc).unwrap();
        let c = log_binomial(8000, 10).unwrap().exp();
        assert!((quadratic_model_principal(pc, 0.0).unwrap() - c).abs() < 1e-9 * c);
        assert!(
            quadratic_model_principal(pc, w.eps_principal)
                .unwrap()
                .abs()
                < 1e-9 * c
        );

        let peak = quadratic_model_subsidiary(pc, 1, 0.0).unwrap();
        let subs = subsidiary_maxima(pc, 1);
        assert!((peak.ln() - subs[0].bound_log_mag).abs() < 1e-12);
        assert!(
            quadratic_model_subsidiary(pc, 1, w.eps_subsidiary)
                .unwrap()
                .abs()
                < 1e-9 * peak
        );
        assert!(quadratic_model_subsidiary(pc, 0, 0.1).is_err());
    }

    #[test]
    fn extremum_refinement_lands_on_predicted_peaks() {
        let pc = PathCount::new(8000, 10).unwrap();
        let z1 = 3.0 * PI / 8001.0;
        let half = PI / 8001.0;
        let (z_peak, log_mag) = locate_extremum(pc, (z1 - half, z1 + half)).unwrap();
        assert!((z_peak - z1).abs() < 0.02 * z1, "peak at {z_peak} vs {z1}");
        assert!(log_mag.is_finite());

        let pc2 = PathCount::new(2000, 10).unwrap();
        let z2 = 5.0 * PI / 2001.0;
        let half = PI / 2001.0;
        let (z_peak, _) = locate_extremum(pc2, (z2 - half, z2 + half)).unwrap();
        assert!((z_peak - z2).abs() < 0.02 * z2);
    }

    #[test]
    fn bracket_around_a_valley_is_rejected() {
        // Center the bracket on the second zero of the n = 1 function.
        let pc = PathCount::new(8000, 1).unwrap();
        let valley = 4.0 * PI / 8000.0;
        let half = 0.4 * PI / 8001.0;
        let err = locate_extremum(pc, (valley - half, valley + half)).unwrap_err();
        assert!(matches!(err, Error::Bracket));
        assert!(locate_extremum(pc, (0.0, 0.1)).is_err());
        assert!(locate_extremum(pc, (0.2, 0.1)).is_err());
    }

    #[test]
    fn exact_limit_matches_known_compensated_values() {
        // z = pi/25 = 2 pi 4/200 makes the q = 50 denominator factor vanish,
        // yet |I| = 4; cross-checked against the recurrence elsewhere.
        let pc = PathCount::new(200, 50).unwrap();
        let lm = root_of_unity_log_magnitude(pc, 4, 200).unwrap();
        assert!((lm - 4.0f64.ln()).abs() < 1e-10, "got log |I| = {lm}");

        // z = 2 pi 69/2001 reduces to a 29th root of unity; |I| = C(68, 1).
        let pc = PathCount::new(2000, 50).unwrap();
        let lm = root_of_unity_log_magnitude(pc, 69, 2001).unwrap();
        assert!((lm - 68.0f64.ln()).abs() < 1e-10, "got log |I| = {lm}");
    }

    #[test]
    fn exact_limit_agrees_with_direct_product_at_regular_points() {
        let pc = PathCount::new(8000, 50).unwrap();
        for (j, divisor) in [
            (1u64, 8001u64),
            (3, 7950),
            (7, 8001),
            (3, 16001),
            (11, 7997),
        ] {
            let z = 2.0 * PI * j as f64 / divisor as f64;
            let direct = product_form(pc, z).unwrap().log_mag;
            let limit = root_of_unity_log_magnitude(pc, j, divisor).unwrap();
            if limit == f64::NEG_INFINITY {
                // j = 11/7997 reduces to an exact zero; both routes must agree.
                assert_eq!(direct, f64::NEG_INFINITY, "j={j}/{divisor}");
            } else {
                assert!(
                    (direct - limit).abs() < 1e-8,
                    "j={j}/{divisor}: direct {direct} vs limit {limit}"
                );
            }
        }
    }

    #[test]
    fn exact_limit_recovers_zeros_and_the_central_value() {
        let pc = PathCount::new(8000, 50).unwrap();
        // First zero family grid point: q = 1, divisor N.
        assert_eq!(
            root_of_unity_log_magnitude(pc, 1, 8000).unwrap(),
            f64::NEG_INFINITY
        );
        // j = 0 degenerates every factor; the matched-pair ratios rebuild C(N, n).
        let central = root_of_unity_log_magnitude(pc, 0, 17).unwrap();
        assert!((central - log_binomial(8000, 50).unwrap()).abs() < 1e-9);
        assert!(root_of_unity_log_magnitude(pc, 1, 0).is_err());
    }

    #[test]
    fn report_collects_everything() {
        let pc = PathCount::new(2000, 10).unwrap();
        let r = feature_report(pc, 4.0 * PI / 10.0, 5).unwrap();
        assert!(!r.zeros.is_empty());
        assert!(!r.unity_points_a.is_empty());
        assert_eq!(r.subsidiary.len(), 5);
        assert!(r.widths.is_some());
        let sorted = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
        assert!(sorted(&r.zeros));
        assert!(sorted(&r.unity_points_a));
        assert!(sorted(&r.unity_points_b));

        let empty = feature_report(PathCount::new(10, 0).unwrap(), 1.0, 3).unwrap();
        assert!(empty.zeros.is_empty());
        assert!(empty.subsidiary.is_empty());
        assert!(empty.widths.is_none());
    }
}
