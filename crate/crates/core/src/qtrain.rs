//! Simulated quantum training of a pair classifier by matrix inversion.
//!
//! The bordered LS-SVM matrix is trace-normalized into `F̂`, exponentiated
//! into `U = e^{iF̂t₀}`, and inverted on `|0,y⟩` with the phase-estimation
//! pipeline: QPE, an ancilla rotation whose `|1⟩` amplitude is
//! `sign(λ̂)·ε/|λ̂|`, inverse QPE, and post-selection on the ancilla reading 1
//! with the clock register returned to zero.
//!
//! Register layout (little-endian): solution qubits `0..q`, clock qubits
//! `q..q+t`, ancilla qubit `q+t`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ledger::ResourceLedger;
use crate::lssvm::{system_matrix, system_rhs, GramMatrix};
use crate::statevector::{
    self, amplitude_encode, apply_uniformly_controlled, doubling_powers, expm_hermitian, qpe_backward, qpe_forward,
    qubits_for, trotter_exp, CMatrix, HermitianOp, QState, C64, MAX_QUBITS,
};

/// Below this post-selection probability the filter is taken to have removed
/// all of the right-hand side.
pub const MIN_SUCCESS_PROBABILITY: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct FHat {
    matrix: DMatrix<f64>,
    trace_f: f64,
    gamma: f64,
    star: DMatrix<f64>,
    gram: DMatrix<f64>,
    ridge: DMatrix<f64>,
}

impl FHat {
    /// Trace-normalized system matrix.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Trace of the unnormalized system matrix.
    pub fn trace_f(&self) -> f64 {
        self.trace_f
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Unnormalized system matrix `J + K + γ⁻¹I`.
    pub fn unnormalized(&self) -> DMatrix<f64> {
        &self.matrix * self.trace_f
    }

    /// The three additive pieces `(J, K, γ⁻¹I)`, each bordered to `(M+1)×(M+1)`
    /// and unnormalized.
    pub fn components(&self) -> (&DMatrix<f64>, &DMatrix<f64>, &DMatrix<f64>) {
        (&self.star, &self.gram, &self.ridge)
    }

    /// `M + 1`.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Assembles `F = [[0, 1ᵀ], [1, K + γ⁻¹I]]` and returns `F / tr F`.
/// `gamma = ∞` drops the ridge term.
pub fn build_fhat(k: &GramMatrix, gamma: f64) -> Result<FHat> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidArgument(format!("gamma must be > 0, got {gamma}")));
    }
    let m = k.dim();
    let n = m + 1;
    let mut star = DMatrix::zeros(n, n);
    let mut gram = DMatrix::zeros(n, n);
    let mut ridge = DMatrix::zeros(n, n);
    for i in 0..m {
        star[(0, i + 1)] = 1.0;
        star[(i + 1, 0)] = 1.0;
        ridge[(i + 1, i + 1)] = 1.0 / gamma;
        for j in 0..m {
            gram[(i + 1, j + 1)] = k.0[(i, j)];
        }
    }
    let f = system_matrix(k, gamma);
    let trace_f = f.trace();
    if !(trace_f > 0.0) {
        return Err(Error::InvalidArgument("system matrix has non-positive trace".into()));
    }
    Ok(FHat {
        matrix: f / trace_f,
        trace_f,
        gamma,
        star,
        gram,
        ridge,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Evolution {
    /// Exact dense exponential.
    Exact,
    /// First-order Lie-Trotter product over the `J`, `K` and `γ⁻¹I` terms.
    Trotter { steps: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionConfig {
    pub precision_qubits: usize,
    pub eps_kr: f64,
    pub t0: f64,
    pub max_postselect_attempts: u64,
    pub evolution: Evolution,
}

impl Default for InversionConfig {
    fn default() -> Self {
        Self {
            precision_qubits: 8,
            eps_kr: 1.0 / 16.0,
            t0: PI,
            max_postselect_attempts: 1_000_000,
            evolution: Evolution::Exact,
        }
    }
}

impl InversionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=12).contains(&self.precision_qubits) {
            return Err(Error::InvalidArgument(format!(
                "precision qubits must be in 1..=12, got {}",
                self.precision_qubits
            )));
        }
        if !(self.eps_kr > 0.0 && self.eps_kr <= 1.0) {
            return Err(Error::InvalidArgument(format!("eps_kr must be in (0, 1], got {}", self.eps_kr)));
        }
        if !(self.t0 > 0.0 && self.t0.is_finite()) {
            return Err(Error::InvalidArgument(format!("t0 must be > 0, got {}", self.t0)));
        }
        if let Evolution::Trotter { steps: 0 } = self.evolution {
            return Err(Error::InvalidArgument("Trotter steps must be >= 1".into()));
        }
        Ok(())
    }
}

/// Embeds `F̂` into the `2^q`-dimensional space of `q = ⌈log₂(M+1)⌉` qubits
/// as a direct sum with a zero block.
pub fn pad_and_embed(fhat: &FHat) -> Result<HermitianOp> {
    embed(fhat.matrix())
}

fn embed(m: &DMatrix<f64>) -> Result<HermitianOp> {
    let q = qubits_for(m.nrows());
    if q > MAX_QUBITS {
        return Err(Error::QubitCap(q));
    }
    let dim = 1usize << q;
    let mut out = CMatrix::zeros(dim, dim);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out[(i, j)] = C64::new(m[(i, j)], 0.0);
        }
    }
    HermitianOp::new(out, (0..q).collect())
}

/// Inversion weight for a signed eigenvalue estimate: `ε/|λ̂|` when
/// `|λ̂| ≥ ε`, otherwise 0.
pub fn eigenvalue_filter(lambda_hat: f64, eps_kr: f64) -> f64 {
    let mag = lambda_hat.abs();
    if mag >= eps_kr && mag > 0.0 {
        (eps_kr / mag).min(1.0)
    } else {
        0.0
    }
}

/// Signed eigenvalue encoded by clock reading `r` of a `t`-bit register for
/// `U = e^{iλt₀}`. Phases above one half wrap to negative eigenvalues.
pub fn reading_to_eigenvalue(r: usize, t: usize, t0: f64) -> f64 {
    let n = (1u64 << t) as f64;
    let mut phase = r as f64 / n;
    if phase > 0.5 {
        phase -= 1.0;
    }
    2.0 * PI * phase / t0
}

#[derive(Debug, Clone)]
pub struct QuantumSolution {
    /// Post-selected solution register, `q` qubits; amplitudes beyond `M+1` are zero.
    pub state: QState,
    pub success_probability: f64,
    /// Joint state after inverse QPE, before post-selection.
    pub final_state: QState,
    pub solution_qubits: usize,
    pub clock_qubits: usize,
    pub ledger: ResourceLedger,
}

impl QuantumSolution {
    pub fn ancilla_qubit(&self) -> usize {
        self.solution_qubits + self.clock_qubits
    }
}

/// Solves `F̂ |b, α⟩ ∝ |0, y⟩`.
pub fn quantum_solve(fhat: &FHat, y: &[f64], cfg: &InversionConfig) -> Result<QuantumSolution> {
    if y.len() + 1 != fhat.dim() {
        return Err(Error::DimensionMismatch {
            expected: fhat.dim() - 1,
            got: y.len(),
        });
    }
    let rhs: Vec<f64> = system_rhs(y).iter().copied().collect();
    let unitary = match cfg.evolution {
        Evolution::Exact => None,
        Evolution::Trotter { steps } => {
            let (j, k, r) = fhat.components();
            let tr = fhat.trace_f();
            let terms = [j / tr, k / tr, r / tr]
                .iter()
                .map(embed)
                .collect::<Result<Vec<_>>>()?;
            // e^{+iF̂t}: negative step in trotter_exp's e^{-iT dt} convention
            let time = evolution_time(fhat.matrix(), cfg);
            Some(trotter_exp(&terms, -time / steps as f64, steps)?)
        }
    };
    invert_with(fhat.matrix(), &rhs, cfg, unitary)
}

/// Phase-estimation inversion of a real symmetric operator with spectrum in
/// `[-1, 1]` applied to `rhs`.
pub fn invert_operator(op: &DMatrix<f64>, rhs: &[f64], cfg: &InversionConfig) -> Result<QuantumSolution> {
    invert_with(op, rhs, cfg, None)
}

fn invert_with(
    op: &DMatrix<f64>,
    rhs: &[f64],
    cfg: &InversionConfig,
    unitary: Option<CMatrix>,
) -> Result<QuantumSolution> {
    cfg.validate()?;
    if op.nrows() != op.ncols() || op.nrows() != rhs.len() {
        return Err(Error::DimensionMismatch {
            expected: op.nrows(),
            got: rhs.len(),
        });
    }
    let embedded = embed(op)?;
    let q = embedded.targets().len();
    let t = cfg.precision_qubits;
    let total = q + t + 1;
    if total > MAX_QUBITS {
        return Err(Error::QubitCap(total));
    }
    let t0 = evolution_time(op, cfg);
    let u = unitary.unwrap_or_else(|| expm_hermitian(embedded.matrix(), -t0));
    warn_if_unrepresentable(op, rhs, t0, cfg.precision_qubits);

    let system: Vec<usize> = (0..q).collect();
    let clock: Vec<usize> = (q..q + t).collect();
    let ancilla = q + t;

    let solution_in = amplitude_encode(rhs)?;
    let mut joint = QState::zero(t + 1)?.tensor(&solution_in)?.into_amplitudes();

    let powers = doubling_powers(&u, t);
    qpe_forward(&mut joint, &powers, &system, &clock);

    let eps = cfg.eps_kr;
    apply_uniformly_controlled(&mut joint, &clock, ancilla, |r| {
        let lambda = reading_to_eigenvalue(r, t, t0);
        let w = eigenvalue_filter(lambda, eps) * lambda.signum();
        let c = (1.0 - w * w).max(0.0).sqrt();
        [
            [C64::new(c, 0.0), C64::new(-w, 0.0)],
            [C64::new(w, 0.0), C64::new(c, 0.0)],
        ]
    });

    let inverse: Vec<CMatrix> = powers.iter().map(|p| p.adjoint()).collect();
    qpe_backward(&mut joint, &inverse, &system, &clock);

    let final_state = QState::from_amplitudes(joint)?;
    let amps = final_state.amplitudes();
    let offset = 1usize << ancilla;
    let dim = 1usize << q;
    // ancilla = 1 and clock = 0 occupy indices [offset, offset + 2^q)
    let branch = &amps[offset..offset + dim];
    let success: f64 = branch.iter().map(|a| a.norm_sqr()).sum();
    if success < MIN_SUCCESS_PROBABILITY {
        return Err(Error::PostSelection(success));
    }
    let attempts = (1.0 / success).ceil() as u64;
    if attempts > cfg.max_postselect_attempts {
        return Err(Error::PostSelection(success));
    }
    let scale = success.sqrt();
    let state = QState::from_amplitudes(branch.iter().map(|a| a / scale).collect())
        .or_else(|_| statevector::amplitude_encode_complex(branch))?;

    let mut ledger = ResourceLedger::new();
    ledger.record_qpe(2 * t as u64);
    ledger.record_shots(attempts);

    Ok(QuantumSolution {
        state,
        success_probability: success,
        final_state,
        solution_qubits: q,
        clock_qubits: t,
        ledger,
    })
}

/// Evolution time actually used: `cfg.t0`, shortened when needed so that every
/// eigenphase `λt/2π` stays at least one clock bin inside `(-½, ½)`. Unit
/// trace does not bound the spectrum of `F̂` by 1 because the star block is
/// indefinite; the Gershgorin row-sum bound does.
pub fn evolution_time(op: &DMatrix<f64>, cfg: &InversionConfig) -> f64 {
    let bound = op
        .row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    if bound == 0.0 {
        return cfg.t0;
    }
    let limit = PI * (1.0 - 2f64.powi(1 - cfg.precision_qubits as i32)) / bound;
    cfg.t0.min(limit)
}

fn warn_if_unrepresentable(op: &DMatrix<f64>, rhs: &[f64], t0: f64, precision: usize) {
    let eig = op.clone().symmetric_eigen();
    let rhs = DVector::from_column_slice(rhs);
    let n = (1u64 << precision) as f64;
    let any_exact = eig.eigenvalues.iter().enumerate().any(|(l, &lambda)| {
        let overlap = eig.eigenvectors.column(l).dot(&rhs).abs();
        let steps = lambda * t0 / (2.0 * PI) * n;
        overlap > 1e-12 && (steps - steps.round()).abs() < 1e-9
    });
    if !any_exact {
        log::warn!(
            "no eigenphase is representable with {precision} clock qubits; inversion is approximate"
        );
    }
}

/// Reads `(b, α)` off the solution register: the real amplitudes give the
/// direction, and the scale minimizes the residual of the unnormalized system.
/// Returns `(b, α, |Σα| / ‖α‖)`; the last value checks the first-row
/// constraint, which the scale cannot change.
pub fn extract_solution(fhat: &FHat, y: &[f64], state: &QState) -> Result<(f64, Vec<f64>, f64)> {
    let n = fhat.dim();
    if y.len() + 1 != n || state.dim() < n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: y.len() + 1,
        });
    }
    let v = DVector::from_iterator(n, state.amplitudes()[..n].iter().map(|a| a.re));
    let fv = fhat.unnormalized() * &v;
    let rhs = system_rhs(y);
    let denom = fv.norm_squared();
    if denom == 0.0 {
        return Err(Error::DegenerateModel);
    }
    let c = fv.dot(&rhs) / denom;
    let sol = v * c;
    let alpha: Vec<f64> = sol.rows(1, n - 1).iter().copied().collect();
    let alpha_norm = alpha.iter().map(|a| a * a).sum::<f64>().sqrt();
    let gauge = if alpha_norm > 0.0 {
        alpha.iter().sum::<f64>().abs() / alpha_norm
    } else {
        0.0
    };
    Ok((sol[0], alpha, gauge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lssvm::{gram_from_points, solve_lssvm, KernelSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn toy() -> FHat {
        build_fhat(&GramMatrix(DMatrix::identity(2, 2)), 1.0).unwrap()
    }

    fn normalized_classical(k: &GramMatrix, y: &[f64], gamma: f64) -> QState {
        let (b, alpha) = solve_lssvm(k, y, gamma).unwrap();
        let mut v = vec![b];
        v.extend(alpha);
        amplitude_encode(&v).unwrap()
    }

    fn fidelity_on_support(out: &QState, reference: &QState) -> f64 {
        let n = reference.dim().min(out.dim());
        let ip: C64 = (0..n).map(|i| out.amplitudes()[i].conj() * reference.amplitudes()[i]).sum();
        ip.norm_sqr()
    }

    #[test]
    fn toy_construction() {
        let f = toy();
        let expected = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 1.0, 1.0, 2.0, 0.0, 1.0, 0.0, 2.0]);
        assert_eq!(f.trace_f(), 4.0);
        assert!((f.matrix() - expected / 4.0).amax() < 1e-15);
        assert!((f.matrix().trace() - 1.0).abs() < 1e-12);
        assert!((f.matrix() - f.matrix().transpose()).amax() < 1e-12);
        let (j, k, r) = f.components();
        assert!((j + k + r - f.unnormalized()).amax() < 1e-12);
        assert_eq!(j.trace(), 0.0);
    }

    #[test]
    fn infinite_gamma_drops_ridge() {
        let k = GramMatrix(DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]));
        let f = build_fhat(&k, f64::INFINITY).unwrap();
        assert_eq!(f.trace_f(), 5.0);
        let (j, gram, ridge) = f.components();
        assert_eq!(ridge.amax(), 0.0);
        assert!((f.matrix() - (j + gram) / 5.0).amax() < 1e-15);
        assert!(build_fhat(&k, 0.0).is_err());
    }

    #[test]
    fn embedding_preserves_spectrum() {
        let f = toy();
        let op = pad_and_embed(&f).unwrap();
        assert_eq!(op.dim(), 4);
        let inner = f.eigenvalues();
        let outer = op.eigenvalues();
        for l in &inner {
            assert!(outer.iter().any(|o| (o - l).abs() < 1e-12));
        }
        assert_eq!(outer.iter().filter(|o| o.abs() < 1e-12).count(), 1);
        for l in inner {
            assert!((-1.0..=1.0).contains(&l));
        }
    }

    #[test]
    fn filter_examples() {
        assert_eq!(eigenvalue_filter(0.25, 0.25), 1.0);
        assert_eq!(eigenvalue_filter(1.0, 0.25), 0.25);
        assert_eq!(eigenvalue_filter(-1.0, 0.25), 0.25);
        assert_eq!(eigenvalue_filter(0.1, 0.25), 0.0);
        assert_eq!(eigenvalue_filter(0.0, 0.25), 0.0);
    }

    #[test]
    fn readings_wrap_to_negative() {
        assert_eq!(reading_to_eigenvalue(0, 4, PI), 0.0);
        assert_eq!(reading_to_eigenvalue(4, 4, PI), 0.5);
        assert_eq!(reading_to_eigenvalue(8, 4, PI), 1.0);
        assert_eq!(reading_to_eigenvalue(12, 4, PI), -0.5);
    }

    #[test]
    fn toy_exact_eigenvector() {
        let f = toy();
        // F (0,1,-1) = 2 (0,1,-1), so λ = 2/4 = 0.5 on the normalized matrix
        let v = DVector::from_row_slice(&[0.0, 1.0, -1.0]);
        assert!((f.unnormalized() * &v - &v * 2.0).amax() < 1e-15);

        let sol = quantum_solve(&f, &[1.0, -1.0], &InversionConfig::default()).unwrap();
        let r = 1.0 / 2f64.sqrt();
        let target = amplitude_encode(&[0.0, r, -r]).unwrap();
        assert!(fidelity_on_support(&sol.state, &target) >= 0.9999);
        let classical = normalized_classical(&GramMatrix(DMatrix::identity(2, 2)), &[1.0, -1.0], 1.0);
        assert!(fidelity_on_support(&sol.state, &classical) >= 0.9999);
        // output amplitude sign follows F̂⁻¹, which is positive on this eigenvector
        assert!(sol.state.amplitudes()[1].re > 0.0);
        // P(success) = (ε/λ)² for an exact eigenvector
        assert!((sol.success_probability - (0.0625f64 / 0.5).powi(2)).abs() < 1e-10);
    }

    #[test]
    fn scaled_identity_returns_input() {
        let op = DMatrix::identity(4, 4) / 4.0;
        let rhs = [0.3, -0.1, 0.8, 0.5];
        let sol = invert_operator(&op, &rhs, &InversionConfig::default()).unwrap();
        let input = amplitude_encode(&rhs).unwrap();
        assert!(fidelity_on_support(&sol.state, &input) > 1.0 - 1e-10);
    }

    #[test]
    fn spectrum_beyond_one_keeps_its_sign() {
        // short vectors and weak ridge: tr F is small and the star block dominates
        let pts: [&[f64]; 2] = [&[0.1, 0.0], &[0.0, 0.1]];
        let k = gram_from_points(&pts, KernelSpec::Linear).unwrap();
        let f = build_fhat(&k, 10.0).unwrap();
        assert!(f.eigenvalues().iter().any(|l| l.abs() > 1.0));
        let cfg = InversionConfig {
            eps_kr: f.eigenvalues().iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min) / 2.0,
            ..Default::default()
        };
        assert!(evolution_time(f.matrix(), &cfg) < PI);
        assert_eq!(evolution_time(toy().matrix(), &cfg), PI);
        let y = [1.0, -1.0];
        let sol = quantum_solve(&f, &y, &cfg).unwrap();
        let fid = fidelity_on_support(&sol.state, &normalized_classical(&k, &y, 10.0));
        assert!(fid >= 0.99, "fidelity {fid}");
    }

    #[test]
    fn random_psd_instance() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let pts: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let refs: Vec<&[f64]> = pts.iter().map(Vec::as_slice).collect();
        let k = gram_from_points(&refs, KernelSpec::Linear).unwrap();
        let y = [1.0, -1.0, 1.0];
        let f = build_fhat(&k, 1.0).unwrap();
        let cfg = InversionConfig {
            precision_qubits: 8,
            eps_kr: f.eigenvalues().iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min) / 2.0,
            ..Default::default()
        };
        let sol = quantum_solve(&f, &y, &cfg).unwrap();
        let classical = normalized_classical(&k, &y, 1.0);
        let fid = fidelity_on_support(&sol.state, &classical);
        assert!(fid >= 0.99, "fidelity {fid}");
    }

    #[test]
    fn success_probability_matches_full_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pts: Vec<Vec<f64>> = (0..4).map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).collect();
        let refs: Vec<&[f64]> = pts.iter().map(Vec::as_slice).collect();
        let k = gram_from_points(&refs, KernelSpec::Linear).unwrap();
        let f = build_fhat(&k, 2.0).unwrap();
        let cfg = InversionConfig {
            precision_qubits: 6,
            eps_kr: 0.02,
            ..Default::default()
        };
        let sol = quantum_solve(&f, &[1.0, 1.0, -1.0, -1.0], &cfg).unwrap();
        let anc = sol.ancilla_qubit();
        let clock_mask = ((1usize << sol.clock_qubits) - 1) << sol.solution_qubits;
        let brute: f64 = sol
            .final_state
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(i, _)| (i >> anc) & 1 == 1 && i & clock_mask == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        assert!((brute - sol.success_probability).abs() < 1e-10);
        assert!((sol.final_state.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn extraction_recovers_classical_model() {
        let k = GramMatrix(DMatrix::identity(2, 2));
        let f = build_fhat(&k, 1.0).unwrap();
        let sol = quantum_solve(&f, &[1.0, -1.0], &InversionConfig::default()).unwrap();
        let (b, alpha, gauge) = extract_solution(&f, &[1.0, -1.0], &sol.state).unwrap();
        assert!(b.abs() < 1e-9);
        assert!((alpha[0] - 0.5).abs() < 1e-9 && (alpha[1] + 0.5).abs() < 1e-9);
        assert!(gauge < 1e-9);
    }

    #[test]
    fn filtering_everything_is_an_error() {
        let op = DMatrix::identity(2, 2) / 2.0;
        let cfg = InversionConfig {
            eps_kr: 0.9,
            ..Default::default()
        };
        assert!(matches!(invert_operator(&op, &[1.0, 0.0], &cfg), Err(Error::PostSelection(_))));
        let bad = InversionConfig {
            precision_qubits: 13,
            ..Default::default()
        };
        assert!(invert_operator(&op, &[1.0, 0.0], &bad).is_err());
    }

    #[test]
    fn trotterized_evolution_converges() {
        // Output infidelity against the exact-exponential run, which is
        // quadratic in the first-order step size.
        let k = GramMatrix(DMatrix::from_row_slice(2, 2, &[1.0, 0.6, 0.6, 1.5]));
        let f = build_fhat(&k, 1.0).unwrap();
        let y = [1.0, -1.0];
        let base = InversionConfig {
            precision_qubits: 6,
            eps_kr: 0.05,
            ..Default::default()
        };
        let exact = quantum_solve(&f, &y, &base).unwrap().state;
        let steps = [16usize, 32, 64, 128];
        let errs: Vec<f64> = steps
            .iter()
            .map(|&s| {
                let cfg = InversionConfig {
                    evolution: Evolution::Trotter { steps: s },
                    ..base
                };
                1.0 - quantum_solve(&f, &y, &cfg).unwrap().state.fidelity(&exact).unwrap()
            })
            .collect();
        let xs: Vec<f64> = steps.iter().map(|&s| (base.t0 / s as f64).ln()).collect();
        let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
        let slope = crate::stats::fit_slope(&xs, &ys);
        assert!(slope >= 1.9, "slope {slope}, errors {errs:?}");
    }
}
