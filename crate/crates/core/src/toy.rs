//! Exact simulation of two-direction step evolution on small Hilbert spaces.
//!
//! A universe holds a Hermitian generator `H_F`, its time-reversed partner
//! `H_B` (entrywise conjugate: time reversal is fixed as complex conjugation
//! in the standard basis), a unit initial state, and a step size `tau`. One
//! step applies `U_F(tau) + U_B(tau)`; `N` steps expand into the operator
//! sums `S_{m,n}` over all interleavings of `m` backward and `n` forward
//! factors, which this module evaluates by three routes:
//!
//! * [`ToyUniverse::enumerate_s`]: the literal sum over orderings (capped);
//! * [`ToyUniverse::reordered_s_approx`]: all factors pulled to one side,
//!   with the ordering phases carried by exponentials of the step
//!   commutator (accurate through `tau^3`);
//! * [`ToyUniverse::spectral_s`]: the same reordered object resolved on the
//!   commutator eigenbasis, one interference weight per eigenvalue.
//!
//! All matrix exponentials go through Hermitian eigendecomposition, so no
//! series-truncation tolerance enters.

use crate::error::{Error, Result};
use crate::interference::{q_recursion, PathCount, PhaseArg};
use crate::tol;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest step count accepted by the evolution routines; the state norm
/// grows like 2^N and must stay inside f64 range.
const MAX_STEPS: u64 = 1000;

/// A small closed system with one forward and one backward generator.
#[derive(Debug, Clone)]
pub struct ToyUniverse {
    dim: usize,
    h_forward: CMatrix,
    h_backward: CMatrix,
    psi0: CVector,
    tau: f64,
}

/// Eigenvalues of the step commutator `i [H_F, H_B]` with one orthogonal
/// projector per degenerate group.
#[derive(Debug, Clone)]
pub struct CommutatorSpectrum {
    pub eigenvalues: Vec<f64>,
    pub projectors: Vec<CMatrix>,
}

/// State after `steps` applications of `U_F + U_B`, optionally decomposed by
/// forward-step count.
#[derive(Debug, Clone)]
pub struct EvolutionRecord {
    pub steps: u64,
    /// `(U_F + U_B)^steps psi0`; generally unnormalized.
    pub state: CVector,
    /// `components[n] = S_{steps-n, n} psi0` when requested.
    pub components: Option<Vec<CVector>>,
}

/// How well the two-endpoint reference `[U_F(Ntau) + U_B(Ntau)] psi0`
/// captures the full evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BievolutionError {
    /// `1 - |<full|reference>|` between unit-normalized states.
    pub fidelity_deficit: f64,
    /// Norm-squared share of the components within `band` of `n = 0` or
    /// `n = N`, relative to the full state.
    pub boundary_mass_fraction: f64,
    pub evolved_norm: f64,
    pub reference_norm: f64,
}

fn hermiticity_deviation(h: &CMatrix) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..h.nrows() {
        for j in 0..h.ncols() {
            dev = dev.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    dev
}

fn require_hermitian(h: &CMatrix) -> Result<()> {
    let scale = 1.0 + h.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let deviation = hermiticity_deviation(h);
    if deviation > tol::HERMITICITY_TOL * scale {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Wigner time reversal for spinless systems in the standard basis: the
/// entrywise complex conjugate. An involution; real symmetric matrices are
/// fixed points.
pub fn time_reverse(h: &CMatrix) -> Result<CMatrix> {
    require_hermitian(h)?;
    Ok(h.map(|v| v.conj()))
}

/// `exp(factor * H)` for Hermitian `H` via eigendecomposition; exact up to
/// the eigensolve.
fn hermitian_exp(h: &CMatrix, factor: Complex64) -> CMatrix {
    let se = h.clone().symmetric_eigen();
    let exps = DVector::from_iterator(
        h.nrows(),
        se.eigenvalues.iter().map(|&l| (factor * l).exp()),
    );
    &se.eigenvectors * CMatrix::from_diagonal(&exps) * se.eigenvectors.adjoint()
}

impl ToyUniverse {
    /// Builds a universe from the forward generator; the backward generator
    /// is its time reverse. The initial state is normalized on construction.
    pub fn new(h_forward: CMatrix, psi0: CVector, tau: f64) -> Result<Self> {
        let dim = h_forward.nrows();
        if dim == 0 || h_forward.ncols() != dim {
            return Err(Error::Domain(format!(
                "generator must be square and nonempty, got {}x{}",
                h_forward.nrows(),
                h_forward.ncols()
            )));
        }
        if dim > tol::MAX_DIMENSION {
            return Err(Error::Domain(format!(
                "dimension {dim} exceeds the supported maximum {}",
                tol::MAX_DIMENSION
            )));
        }
        if psi0.len() != dim {
            return Err(Error::Domain(format!(
                "initial state has length {} but the space has dimension {dim}",
                psi0.len()
            )));
        }
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::Domain(format!(
                "step size must be finite and nonnegative, got {tau}"
            )));
        }
        let h_backward = time_reverse(&h_forward)?;
        let norm = psi0.norm();
        if norm == 0.0 {
            return Err(Error::Domain("initial state must be nonzero".into()));
        }
        Ok(ToyUniverse {
            dim,
            h_forward,
            h_backward,
            psi0: psi0 / Complex64::new(norm, 0.0),
            tau,
        })
    }

    /// Deterministic random universe: Hermitian generator with independent
    /// standard-normal real and imaginary parts (symmetrized), random unit
    /// initial state.
    pub fn random(dim: usize, tau: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| -> Complex64 {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        };
        let a = CMatrix::from_fn(dim, dim, |_, _| draw(&mut rng));
        let h = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
        let psi0 = CVector::from_fn(dim, |_, _| draw(&mut rng));
        ToyUniverse::new(h, psi0, tau)
    }

    /// The standard two-level example with maximal asymmetry between the
    /// time directions: `H_F = (sigma_x + sigma_y)/2`, so the step
    /// commutator is exactly `sigma_z` (eigenvalues -1 and +1). The initial
    /// state is the first basis vector.
    pub fn two_level_example(tau: f64) -> Self {
        let h = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(0.5, -0.5),
                Complex64::new(0.5, 0.5),
                Complex64::new(0.0, 0.0),
            ],
        );
        let psi0 =
            CVector::from_column_slice(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        ToyUniverse::new(h, psi0, tau).expect("static example is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn h_forward(&self) -> &CMatrix {
        &self.h_forward
    }

    pub fn h_backward(&self) -> &CMatrix {
        &self.h_backward
    }

    pub fn psi0(&self) -> &CVector {
        &self.psi0
    }

    /// One-step propagators `U_F = exp(-i tau H_F)`, `U_B = exp(+i tau H_B)`.
    pub fn step_operators(&self) -> (CMatrix, CMatrix) {
        (
            hermitian_exp(&self.h_forward, Complex64::new(0.0, -self.tau)),
            hermitian_exp(&self.h_backward, Complex64::new(0.0, self.tau)),
        )
    }

    /// Forward and backward propagators over `steps` whole steps.
    fn long_propagators(&self, steps: u64) -> (CMatrix, CMatrix) {
        let t = steps as f64 * self.tau;
        (
            hermitian_exp(&self.h_forward, Complex64::new(0.0, -t)),
            hermitian_exp(&self.h_backward, Complex64::new(0.0, t)),
        )
    }

    fn check_steps(steps: u64) -> Result<()> {
        if steps > MAX_STEPS {
            return Err(Error::Domain(format!(
                "step count {steps} exceeds {MAX_STEPS}; the state norm would overflow"
            )));
        }
        Ok(())
    }

    /// Applies `(U_F + U_B)` to the initial state `steps` times. With
    /// `with_components`, also splits the result by forward-step count via
    /// the lattice recurrence
    /// `S_{m,n} psi = U_B S_{m-1,n} psi + U_F S_{m,n-1} psi`,
    /// an independent route whose sum must reproduce the state.
    pub fn symmetric_evolve(&self, steps: u64, with_components: bool) -> Result<EvolutionRecord> {
        Self::check_steps(steps)?;
        let (uf, ub) = self.step_operators();
        let one_step = &uf + &ub;
        let mut state = self.psi0.clone();
        for _ in 0..steps {
            state = &one_step * state;
        }
        let components = if with_components {
            let n = steps as usize;
            let mut row: Vec<CVector> = vec![self.psi0.clone()];
            for _ in 0..n {
                let prev = &row;
                let mut next: Vec<CVector> = Vec::with_capacity(prev.len() + 1);
                for k in 0..=prev.len() {
                    let mut v = CVector::zeros(self.dim);
                    if k < prev.len() {
                        v += &ub * &prev[k];
                    }
                    if k > 0 {
                        v += &uf * &prev[k - 1];
                    }
                    next.push(v);
                }
                row = next;
            }
            Some(row)
        } else {
            None
        };
        Ok(EvolutionRecord {
            steps,
            state,
            components,
        })
    }

    /// The literal operator sum over every ordering of `backward` factors
    /// `U_B` and `forward` factors `U_F`; the enumeration shares prefixes,
    /// so it costs about two matrix products per ordering.
    pub fn enumerate_s(&self, backward: u64, forward: u64) -> Result<CMatrix> {
        let pc = PathCount::from_split(backward, forward);
        let log_paths = pc.log_path_count();
        if log_paths > tol::ENUMERATION_PATH_CAP.ln() + 1e-9 {
            return Err(Error::EnumerationCap {
                total: pc.total(),
                forward: pc.forward(),
                log10_paths: log_paths / std::f64::consts::LN_10,
                log10_cap: tol::ENUMERATION_PATH_CAP.log10(),
            });
        }
        let (uf, ub) = self.step_operators();
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        fn rec(
            prefix: CMatrix,
            backward: u64,
            forward: u64,
            uf: &CMatrix,
            ub: &CMatrix,
            acc: &mut CMatrix,
        ) {
            if backward == 0 && forward == 0 {
                *acc += prefix;
                return;
            }
            if forward > 0 {
                rec(&prefix * uf, backward, forward - 1, uf, ub, acc);
            }
            if backward > 0 {
                rec(&prefix * ub, backward - 1, forward, uf, ub, acc);
            }
        }
        rec(
            CMatrix::identity(self.dim, self.dim),
            backward,
            forward,
            &uf,
            &ub,
            &mut acc,
        );
        Ok(acc)
    }

    /// Eigenvalues and projectors of the Hermitian step commutator
    /// `i [H_F, H_B]`. Eigenvalues closer than
    /// [`tol::EIGEN_MERGE_REL`] x spectral norm are merged into one group.
    pub fn commutator_spectrum(&self) -> CommutatorSpectrum {
        let c = &self.h_forward * &self.h_backward - &self.h_backward * &self.h_forward;
        let lambda = c * Complex64::new(0.0, 1.0);
        let se = lambda.symmetric_eigen();
        let mut order: Vec<usize> = (0..self.dim).collect();
        order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
        let scale = se.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let gap = tol::EIGEN_MERGE_REL * scale;
        let mut eigenvalues = Vec::new();
        let mut projectors = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let mut j = i;
            while j + 1 < order.len()
                && se.eigenvalues[order[j + 1]] - se.eigenvalues[order[j]] <= gap
            {
                j += 1;
            }
            let mut proj = CMatrix::zeros(self.dim, self.dim);
            let mut mean = 0.0;
            for &idx in &order[i..=j] {
                let col = se.eigenvectors.column(idx);
                proj += col * col.adjoint();
                mean += se.eigenvalues[idx];
            }
            eigenvalues.push(mean / (j - i + 1) as f64);
            projectors.push(proj);
            i = j + 1;
        }
        CommutatorSpectrum {
            eigenvalues,
            projectors,
        }
    }

    /// True when the initial state has (up to `overlap_tol`) no component in
    /// the zero eigenspace of the step commutator; vacuously true when there
    /// is no zero eigenvalue.
    pub fn nonzero_eigenvalue_condition(&self, overlap_tol: f64) -> bool {
        let spec = self.commutator_spectrum();
        match spec.zero_projector() {
            None => true,
            Some(p) => (p * &self.psi0).norm() <= overlap_tol,
        }
    }

    /// `S_{m,n}` with all backward factors pulled left and all forward
    /// factors right; the ordering corrections ride along as exponentials of
    /// the step commutator, weighted by how many index tuples share each
    /// phase sum. Agrees with [`ToyUniverse::enumerate_s`] through `tau^3`,
    /// and exactly when the generators commute.
    pub fn reordered_s_approx(&self, backward: u64, forward: u64) -> Result<CMatrix> {
        let pc = PathCount::from_split(backward, forward);
        let log_paths = pc.log_path_count();
        if log_paths > tol::ENUMERATION_PATH_CAP.ln() + 1e-9 {
            return Err(Error::EnumerationCap {
                total: pc.total(),
                forward: pc.forward(),
                log10_paths: log_paths / std::f64::consts::LN_10,
                log10_cap: tol::ENUMERATION_PATH_CAP.log10(),
            });
        }
        let counts = tuple_sum_counts(backward, forward);
        let spec = self.commutator_spectrum();
        let z = self.tau * self.tau;
        let mut inner = CMatrix::zeros(self.dim, self.dim);
        for (lam, proj) in spec.eigenvalues.iter().zip(&spec.projectors) {
            let mut w = Complex64::new(0.0, 0.0);
            for (s, &c) in counts.iter().enumerate() {
                if c != 0.0 {
                    w += Complex64::cis(-(s as f64) * z * lam) * c;
                }
            }
            inner += proj * w;
        }
        let (uf_n, ub_m) = self.long_propagators_pair(backward, forward);
        Ok(&ub_m * &uf_n * inner)
    }

    /// Spectral form of the reordered sum: one interference weight
    /// `I_{m,n}(tau^2 lambda_j)` per commutator eigenvalue, evaluated by the
    /// lattice recurrence.
    pub fn spectral_s(&self, backward: u64, forward: u64) -> Result<CMatrix> {
        let pc = PathCount::from_split(backward, forward);
        let spec = self.commutator_spectrum();
        let mut inner = CMatrix::zeros(self.dim, self.dim);
        for (lam, proj) in spec.eigenvalues.iter().zip(&spec.projectors) {
            let w = q_recursion(pc, PhaseArg::from_time_step(self.tau, *lam))?;
            inner += proj * w;
        }
        let (uf_n, ub_m) = self.long_propagators_pair(backward, forward);
        Ok(&ub_m * &uf_n * inner)
    }

    fn long_propagators_pair(&self, backward: u64, forward: u64) -> (CMatrix, CMatrix) {
        let tf = forward as f64 * self.tau;
        let tb = backward as f64 * self.tau;
        (
            hermitian_exp(&self.h_forward, Complex64::new(0.0, -tf)),
            hermitian_exp(&self.h_backward, Complex64::new(0.0, tb)),
        )
    }

    /// `[U_F(N tau) + U_B(N tau)] psi0`: evolution that visits only the two
    /// pure time directions.
    pub fn bievolution_reference(&self, steps: u64) -> CVector {
        let (uf, ub) = self.long_propagators(steps);
        &uf * &self.psi0 + &ub * &self.psi0
    }

    /// Compares the full `N`-step state against the two-endpoint reference
    /// and reports how much of the state sits in components within `band`
    /// of the all-backward or all-forward corner.
    pub fn bievolution_error(&self, steps: u64, band: u64) -> Result<BievolutionError> {
        let record = self.symmetric_evolve(steps, true)?;
        let components = record.components.as_ref().expect("components requested");
        let psi = &record.state;
        let phi = self.bievolution_reference(steps);
        let evolved_norm = psi.norm();
        let reference_norm = phi.norm();
        let fidelity_deficit = if evolved_norm == 0.0 || reference_norm == 0.0 {
            1.0
        } else {
            1.0 - psi.dotc(&phi).norm() / (evolved_norm * reference_norm)
        };
        let mut boundary = CVector::zeros(self.dim);
        for (n, comp) in components.iter().enumerate() {
            let n = n as u64;
            if n <= band || n + band >= steps {
                boundary += comp;
            }
        }
        let boundary_mass_fraction = if evolved_norm == 0.0 {
            1.0
        } else {
            (boundary.norm() / evolved_norm).powi(2)
        };
        Ok(BievolutionError {
            fidelity_deficit,
            boundary_mass_fraction,
            evolved_norm,
            reference_norm,
        })
    }
}

impl CommutatorSpectrum {
    /// Projector onto the eigenvalue group(s) within
    /// [`tol::ZERO_BAND_REL`] x spectral norm of zero, if any. A vanishing
    /// commutator yields the identity.
    pub fn zero_projector(&self) -> Option<CMatrix> {
        let scale = self.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return self.projectors.first().map(|p| {
                let mut acc = CMatrix::zeros(p.nrows(), p.ncols());
                for q in &self.projectors {
                    acc += q;
                }
                acc
            });
        }
        let band = tol::ZERO_BAND_REL * scale;
        let mut acc: Option<CMatrix> = None;
        for (lam, proj) in self.eigenvalues.iter().zip(&self.projectors) {
            if lam.abs() <= band {
                acc = Some(match acc {
                    None => proj.clone(),
                    Some(a) => a + proj,
                });
            }
        }
        acc
    }
}

/// `counts[s]` = number of weakly decreasing tuples of length `forward`
/// with entries in `[0, backward]` summing to `s`; the caller has already
/// checked the enumeration cap.
fn tuple_sum_counts(backward: u64, forward: u64) -> Vec<f64> {
    let n = forward as usize;
    let max_sum = (backward * forward) as usize;
    let mut counts = vec![0.0f64; max_sum + 1];
    if n == 0 {
        counts[0] = 1.0;
        return counts;
    }
    let mut tuple = vec![0u64; n];
    let mut s = 0u64;
    loop {
        counts[s as usize] += 1.0;
        let mut i = n;
        loop {
            if i == 0 {
                return counts;
            }
            let limit = if i == 1 { backward } else { tuple[i - 2] };
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

#[cfg(test)]
mod tests {
    use super::*;

    fn mat2(entries: [Complex64; 4]) -> CMatrix {
        CMatrix::from_row_slice(2, 2, &entries)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_symmetric_universe(tau: f64) -> ToyUniverse {
        let h = mat2([c(0.3, 0.0), c(0.7, 0.0), c(0.7, 0.0), c(-0.2, 0.0)]);
        let psi0 = CVector::from_column_slice(&[c(0.6, 0.0), c(0.8, 0.0)]);
        ToyUniverse::new(h, psi0, tau).unwrap()
    }

    #[test]
    fn time_reverse_is_conjugation() {
        let h = mat2([c(1.0, 0.0), c(0.5, -0.5), c(0.5, 0.5), c(-1.0, 0.0)]);
        let r = time_reverse(&h).unwrap();
        assert_eq!(r[(0, 1)], c(0.5, 0.5));
        let rr = time_reverse(&r).unwrap();
        assert!((&rr - &h).norm() < 1e-15);

        let real = mat2([c(0.2, 0.0), c(0.4, 0.0), c(0.4, 0.0), c(0.9, 0.0)]);
        assert!((&time_reverse(&real).unwrap() - &real).norm() == 0.0);

        let bad = mat2([c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            time_reverse(&bad).unwrap_err(),
            Error::NotHermitian { .. }
        ));
    }

    #[test]
    fn universe_construction_checks() {
        let h = mat2([c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let psi = CVector::from_column_slice(&[c(3.0, 0.0), c(4.0, 0.0)]);
        let u = ToyUniverse::new(h.clone(), psi, 0.1).unwrap();
        assert!((u.psi0().norm() - 1.0).abs() < 1e-12);
        assert!(ToyUniverse::new(h.clone(), CVector::zeros(2), 0.1).is_err());
        assert!(ToyUniverse::new(h.clone(), CVector::zeros(3), 0.1).is_err());
        assert!(ToyUniverse::new(h, CVector::from_element(2, c(1.0, 0.0)), -0.5).is_err());
        let big = CMatrix::identity(17, 17);
        assert!(ToyUniverse::new(big, CVector::from_element(17, c(1.0, 0.0)), 0.1).is_err());
    }

    #[test]
    fn random_universes_are_deterministic_and_valid() {
        let a = ToyUniverse::random(4, 0.2, 42).unwrap();
        let b = ToyUniverse::random(4, 0.2, 42).unwrap();
        assert!((a.h_forward() - b.h_forward()).norm() == 0.0);
        assert!((a.psi0() - b.psi0()).norm() == 0.0);
        let other = ToyUniverse::random(4, 0.2, 43).unwrap();
        assert!((a.h_forward() - other.h_forward()).norm() > 1e-6);
        assert!(hermiticity_deviation(a.h_forward()) < 1e-14);
    }

    #[test]
    fn step_operators_are_unitary_and_conjugate_paired() {
        for seed in [1u64, 2, 3] {
            let u = ToyUniverse::random(3, 0.37, seed).unwrap();
            let (uf, ub) = u.step_operators();
            let id = CMatrix::identity(3, 3);
            assert!((&uf * uf.adjoint() - &id).norm() < 1e-10);
            assert!((&ub * ub.adjoint() - &id).norm() < 1e-10);
            // H_B = conj(H_F) forces U_B = conj(U_F).
            assert!((ub.map(|v| v.conj()) - &uf).norm() < 1e-10);
        }
    }

    #[test]
    fn zero_step_size_gives_identities() {
        let u = ToyUniverse::two_level_example(0.0);
        let (uf, ub) = u.step_operators();
        let id = CMatrix::identity(2, 2);
        assert!((uf - &id).norm() < 1e-12);
        assert!((ub - &id).norm() < 1e-12);
    }

    #[test]
    fn scalar_universe_is_a_phase() {
        let h = CMatrix::from_element(1, 1, c(0.8, 0.0));
        let u = ToyUniverse::new(h, CVector::from_element(1, c(1.0, 0.0)), 0.5).unwrap();
        let (uf, _) = u.step_operators();
        assert!((uf[(0, 0)] - Complex64::cis(-0.4)).norm() < 1e-12);
    }

    #[test]
    fn evolution_matches_cosine_in_the_t_invariant_case() {
        let u = real_symmetric_universe(0.45);
        let rec = u.symmetric_evolve(1, false).unwrap();
        // U_F + U_B = 2 cos(tau H) when H_B = H_F.
        let cos_h = (hermitian_exp(u.h_forward(), c(0.0, -0.45))
            + hermitian_exp(u.h_forward(), c(0.0, 0.45)))
            * c(0.5, 0.0);
        let want = &cos_h * u.psi0() * c(2.0, 0.0);
        assert!((&rec.state - &want).norm() < 1e-12);

        let rec0 = u.symmetric_evolve(0, false).unwrap();
        assert!((&rec0.state - u.psi0()).norm() == 0.0);
    }

    #[test]
    fn components_sum_to_the_state() {
        let u = ToyUniverse::random(2, 0.3, 42).unwrap();
        let rec = u.symmetric_evolve(8, true).unwrap();
        let comps = rec.components.as_ref().unwrap();
        assert_eq!(comps.len(), 9);
        let mut sum = CVector::zeros(2);
        for v in comps {
            sum += v;
        }
        assert!((&sum - &rec.state).norm() < 1e-9 * rec.state.norm().max(1.0));
        // Each component matches the literal enumeration.
        for (n, v) in comps.iter().enumerate() {
            let s = u.enumerate_s(8 - n as u64, n as u64).unwrap();
            assert!((&s * u.psi0() - v).norm() < 1e-9 * v.norm().max(1.0));
        }
    }

    #[test]
    fn enumeration_small_cases() {
        let u = ToyUniverse::two_level_example(0.31);
        let (uf, ub) = u.step_operators();
        let s11 = u.enumerate_s(1, 1).unwrap();
        assert!((&s11 - (&uf * &ub + &ub * &uf)).norm() < 1e-12);
        // A single ordering composes into one long step.
        let s03 = u.enumerate_s(0, 3).unwrap();
        let long = hermitian_exp(u.h_forward(), c(0.0, -3.0 * 0.31));
        assert!((&s03 - &long).norm() < 1e-10);
        assert!(u.enumerate_s(20, 20).is_err());
    }

    #[test]
    fn binomial_identity_over_orderings() {
        let u = ToyUniverse::random(2, 0.25, 7).unwrap();
        let steps = 6u64;
        let rec = u.symmetric_evolve(steps, false).unwrap();
        let mut sum = CVector::zeros(2);
        for n in 0..=steps {
            sum += u.enumerate_s(steps - n, n).unwrap() * u.psi0();
        }
        assert!((&sum - &rec.state).norm() < 1e-9 * rec.state.norm());
    }

    #[test]
    fn commutator_spectrum_of_the_two_level_example() {
        let u = ToyUniverse::two_level_example(0.2);
        let spec = u.commutator_spectrum();
        assert_eq!(spec.eigenvalues.len(), 2);
        assert!((spec.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((spec.eigenvalues[1] - 1.0).abs() < 1e-12);
        check_spectrum_invariants(&u, &spec);
    }

    fn check_spectrum_invariants(u: &ToyUniverse, spec: &CommutatorSpectrum) {
        let d = u.dim();
        let mut sum = CMatrix::zeros(d, d);
        let mut rebuilt = CMatrix::zeros(d, d);
        for (lam, p) in spec.eigenvalues.iter().zip(&spec.projectors) {
            assert!((p * p - p).norm() < 1e-10, "projector not idempotent");
            assert!((p.adjoint() - p).norm() < 1e-10, "projector not hermitian");
            sum += p;
            rebuilt += p * c(*lam, 0.0);
        }
        assert!((&sum - CMatrix::identity(d, d)).norm() < 1e-10);
        let commutator =
            (u.h_forward() * u.h_backward() - u.h_backward() * u.h_forward()) * c(0.0, 1.0);
        assert!((&rebuilt - &commutator).norm() < 1e-10);
        let trace: Complex64 = rebuilt.diagonal().iter().sum();
        assert!(trace.norm() < 1e-10, "commutator must be traceless");
    }

    #[test]
    fn spectrum_invariants_hold_for_random_universes() {
        for seed in [11u64, 12, 13] {
            let u = ToyUniverse::random(4, 0.15, seed).unwrap();
            let spec = u.commutator_spectrum();
            check_spectrum_invariants(&u, &spec);
        }
    }

    #[test]
    fn vanishing_commutator_collapses_the_spectrum() {
        let u = real_symmetric_universe(0.3);
        let spec = u.commutator_spectrum();
        assert_eq!(spec.eigenvalues.len(), 1);
        assert_eq!(spec.eigenvalues[0], 0.0);
        let p = spec.zero_projector().unwrap();
        assert!((&p - CMatrix::identity(2, 2)).norm() < 1e-10);
        assert!(!u.nonzero_eigenvalue_condition(tol::OVERLAP_TOL));
    }

    #[test]
    fn nonzero_eigenvalue_condition_for_the_two_level_example() {
        for seed in [5u64, 6] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut draw = || {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                c(re, im)
            };
            let psi = CVector::from_fn(2, |_, _| draw());
            let base = ToyUniverse::two_level_example(0.2);
            let u = ToyUniverse::new(base.h_forward().clone(), psi, 0.2).unwrap();
            assert!(u.nonzero_eigenvalue_condition(tol::OVERLAP_TOL));
        }
    }

    #[test]
    fn reordering_reduces_to_enumeration_when_commuting_or_static() {
        let u = real_symmetric_universe(0.4);
        for (m, n) in [(2u64, 2u64), (3, 1), (0, 4)] {
            let a = u.enumerate_s(m, n).unwrap();
            let b = u.reordered_s_approx(m, n).unwrap();
            assert!((&a - &b).norm() < 1e-10, "commuting case (m,n)=({m},{n})");
        }
        let frozen = ToyUniverse::two_level_example(0.0);
        let a = frozen.enumerate_s(2, 3).unwrap();
        let b = frozen.reordered_s_approx(2, 3).unwrap();
        assert!((&a - CMatrix::identity(2, 2) * c(10.0, 0.0)).norm() < 1e-12);
        assert!((&a - &b).norm() < 1e-12);
    }

    #[test]
    fn spectral_and_reordered_forms_agree() {
        let u = ToyUniverse::random(3, 0.21, 9).unwrap();
        for (m, n) in [(2u64, 2u64), (4, 3), (1, 5), (6, 0)] {
            let a = u.reordered_s_approx(m, n).unwrap();
            let b = u.spectral_s(m, n).unwrap();
            assert!(
                (&a - &b).norm() < 1e-9 * a.norm().max(1.0),
                "(m,n)=({m},{n}): {}",
                (&a - &b).norm()
            );
        }
        // n = 0 is exactly the backward propagator.
        let s = u.spectral_s(5, 0).unwrap();
        let (_, ub5) = u.long_propagators_pair(5, 0);
        assert!((&s - &ub5).norm() < 1e-10);
    }

    #[test]
    fn reordering_error_shrinks_with_the_cube_of_the_step() {
        // ||H_F|| = 1 here: the two-level generator scaled by sqrt(2).
        let base = ToyUniverse::two_level_example(0.0);
        let h = base.h_forward() * c(2f64.sqrt(), 0.0);
        let errs: Vec<f64> = [0.2f64, 0.1, 0.05]
            .iter()
            .map(|&tau| {
                let u = ToyUniverse::new(h.clone(), base.psi0().clone(), tau).unwrap();
                let exact = u.enumerate_s(2, 2).unwrap();
                let approx = u.spectral_s(2, 2).unwrap();
                (&exact - &approx).norm()
            })
            .collect();
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!(
                (6.4..=9.6).contains(&ratio),
                "halving the step scaled the error by {ratio}"
            );
        }
    }

    #[test]
    fn bievolution_reference_and_error() {
        let u = ToyUniverse::random(2, 0.3, 21).unwrap();
        let r0 = u.bievolution_reference(0);
        assert!((&r0 - u.psi0() * c(2.0, 0.0)).norm() < 1e-12);
        let r1 = u.bievolution_reference(1);
        let e1 = u.symmetric_evolve(1, false).unwrap();
        assert!((&r1 - &e1.state).norm() < 1e-12);
        let err = u.bievolution_error(1, 1).unwrap();
        assert!(err.fidelity_deficit.abs() < 1e-12);
        assert!((err.boundary_mass_fraction - 1.0).abs() < 1e-12);

        // Without any asymmetry between the directions nothing suppresses
        // the interior components.
        let flat = real_symmetric_universe(0.35);
        let err = flat.bievolution_error(8, 1).unwrap();
        assert!(
            err.boundary_mass_fraction < 0.9,
            "boundary fraction {} should stay well below 1",
            err.boundary_mass_fraction
        );
    }

    #[test]
    fn tuple_sum_counts_match_path_totals() {
        let counts = tuple_sum_counts(2, 2);
        // Tuples: (0,0) (1,0) (1,1) (2,0) (2,1) (2,2) -> sums 0,1,2,2,3,4.
        assert_eq!(counts, vec![1.0, 1.0, 2.0, 1.0, 1.0]);
        let total: f64 = tuple_sum_counts(3, 4).iter().sum();
        assert_eq!(total, 35.0); // C(7, 4)
    }
}
