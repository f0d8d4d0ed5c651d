//! Swap-test classification of a query against a trained pair model.
//!
//! Both states live on an index register of `⌈log₂(M+1)⌉` qubits (high) and a
//! data register of `⌈log₂ d⌉` qubits (low). Slot 0 holds the bias term with
//! the data register in `|0…0⟩`; slot `l` holds training point `x_l`.
//!
//! ```text
//! |ũ⟩ ∝ b|0⟩|0⟩ + Σ_l α_l |x_l| |l⟩|x_l/|x_l|⟩      N_ũ = b² + Σ α_l² |x_l|²
//! |x̃⟩ ∝   |0⟩|0⟩ + Σ_l   |x|   |l⟩|x/|x|⟩          N_x̃ = M|x|² + 1
//! ```
//!
//! so `⟨ũ|x̃⟩ = (b + Σ α_l x_lᵀx) / √(N_ũ N_x̃)` is the classical margin up to a
//! positive factor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ledger::ResourceLedger;
use crate::lssvm::{KernelSpec, LssvmModel};
use crate::statevector::{apply_gate, evolve, gates, qubits_for, CMatrix, HermitianOp, QState, C64};

/// Largest `max(|x_i|, |x_j|)·t` for which the small-angle inversion is trusted.
pub const SMALL_ANGLE_LIMIT: f64 = 0.2;

/// Relative margin below which the swap-test verdict may disagree with the
/// classical sign: points with `|margin| <= EXCLUSION_BAND · max|margin|` are
/// excluded from agreement checks.
pub const EXCLUSION_BAND: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub index_qubits: usize,
    pub data_qubits: usize,
}

impl RegisterLayout {
    pub fn for_model(slots: usize, d: usize) -> Self {
        Self {
            index_qubits: qubits_for(slots + 1),
            data_qubits: qubits_for(d),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.index_qubits + self.data_qubits
    }

    fn position(&self, slot: usize, data: usize) -> usize {
        (slot << self.data_qubits) | data
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingState {
    pub state: QState,
    pub norm_const: f64,
    pub layout: RegisterLayout,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryState {
    pub state: QState,
    pub norm_const: f64,
    pub layout: RegisterLayout,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairProbability {
    pub f: usize,
    pub s: usize,
    pub p: f64,
    /// Zero in exact mode.
    pub shots_used: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProbabilityMode {
    Exact,
    Sampled { shots: u64 },
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

pub fn build_training_state(model: &LssvmModel) -> Result<TrainingState> {
    if model.kernel != KernelSpec::Linear {
        return Err(Error::KernelUnsupported);
    }
    let m = model.alpha.len();
    let d = model.d().max(1);
    let layout = RegisterLayout::for_model(m, d);
    let mut amps = vec![C64::new(0.0, 0.0); 1 << layout.n_qubits()];
    amps[layout.position(0, 0)] = C64::new(model.b, 0.0);
    let mut norm_const = model.b * model.b;
    for (l, (a, x)) in model.alpha.iter().zip(&model.support).enumerate() {
        let xn = norm(x);
        norm_const += a * a * xn * xn;
        if xn == 0.0 {
            continue;
        }
        // α_l|x_l| · x_l/|x_l| = α_l x_l
        for (i, v) in x.iter().enumerate() {
            amps[layout.position(l + 1, i)] = C64::new(a * v, 0.0);
        }
    }
    if norm_const == 0.0 {
        return Err(Error::DegenerateModel);
    }
    let scale = norm_const.sqrt();
    amps.iter_mut().for_each(|a| *a /= scale);
    Ok(TrainingState {
        state: QState::from_amplitudes(amps)?,
        norm_const,
        layout,
    })
}

/// Query state for a model with `slots` training points.
pub fn build_query_state(x: &[f64], slots: usize) -> Result<QueryState> {
    let xn = norm(x);
    if xn == 0.0 || x.is_empty() {
        return Err(Error::ZeroVector);
    }
    let layout = RegisterLayout::for_model(slots, x.len());
    let norm_const = slots as f64 * xn * xn + 1.0;
    let scale = norm_const.sqrt();
    let mut amps = vec![C64::new(0.0, 0.0); 1 << layout.n_qubits()];
    amps[layout.position(0, 0)] = C64::new(1.0 / scale, 0.0);
    for l in 1..=slots {
        for (i, v) in x.iter().enumerate() {
            amps[layout.position(l, i)] = C64::new(v / scale, 0.0);
        }
    }
    Ok(QueryState {
        state: QState::from_amplitudes(amps)?,
        norm_const,
        layout,
    })
}

/// Prepares `(|0⟩|u⟩ + |1⟩|x⟩)/√2`, applies a Hadamard to the ancilla (the top
/// qubit) and returns the exact probability of reading 1, `½(1 - Re⟨u|x⟩)`.
pub fn interference_probability(u: &QState, x: &QState) -> Result<f64> {
    if u.dim() != x.dim() {
        return Err(Error::LayoutMismatch);
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let amps: Vec<C64> = u.amplitudes().iter().chain(x.amplitudes()).map(|a| a * r).collect();
    let psi = QState::from_amplitudes(amps)?;
    let ancilla = psi.n_qubits() - 1;
    let mixed = apply_gate(&psi, &gates::h(), &[ancilla], &[])?;
    mixed.probability_of(ancilla, 1)
}

pub fn pair_probability(
    u: &TrainingState,
    x: &QueryState,
    pair: (usize, usize),
    mode: ProbabilityMode,
    seed: u64,
    ledger: &mut ResourceLedger,
) -> Result<PairProbability> {
    if u.layout != x.layout {
        return Err(Error::LayoutMismatch);
    }
    let exact = interference_probability(&u.state, &x.state)?;
    let (p, shots_used) = match mode {
        ProbabilityMode::Exact => (exact, 0),
        ProbabilityMode::Sampled { shots } => {
            if shots == 0 {
                return Err(Error::InvalidArgument("shots must be > 0".into()));
            }
            ledger.record_shots(shots);
            (bernoulli_frequency(exact, shots, seed), shots)
        }
    };
    Ok(PairProbability {
        f: pair.0,
        s: pair.1,
        p,
        shots_used,
    })
}

/// Fraction of `shots` seeded Bernoulli(`p`) draws that come up 1.
pub fn bernoulli_frequency(p: f64, shots: u64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..shots).filter(|_| rng.random::<f64>() < p).count();
    hits as f64 / shots as f64
}

/// `f` when `p < ½`, else `s`.
pub fn classify_pair(p: &PairProbability) -> usize {
    if p.p < 0.5 {
        p.f
    } else {
        p.s
    }
}

/// Shots needed to estimate a probability near `p_hint` to accuracy `eps`:
/// `max(16, ⌈p(1-p)/eps²⌉)`.
pub fn shots_for_accuracy(p_hint: f64, eps: f64) -> Result<u64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be > 0, got {eps}")));
    }
    let p = p_hint.clamp(0.0, 1.0);
    let raw = p * (1.0 - p) / (eps * eps);
    // absorb representation error so that 0.25/0.05² is 100, not 101
    let n = (raw - 1e-9 * raw.max(1.0)).ceil().max(0.0) as u64;
    Ok(n.max(16))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSumMode {
    Exact,
    Sampled { shots: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSumEstimate {
    /// Ancilla-1 probability, exact or sampled.
    pub probability: f64,
    /// `2p/t²`, the small-angle estimate of `|x_i|² + |x_j|²`.
    pub estimate: f64,
}

/// `H = (|x_i| |0⟩⟨0| + |x_j| |1⟩⟨1|) ⊗ σ_x` on (index qubit 1, ancilla qubit 0).
pub fn norm_sum_hamiltonian(ni: f64, nj: f64) -> Result<HermitianOp> {
    let mut m = CMatrix::zeros(4, 4);
    for (idx, n) in [(0usize, ni), (1, nj)] {
        m[(2 * idx, 2 * idx + 1)] = C64::new(n, 0.0);
        m[(2 * idx + 1, 2 * idx)] = C64::new(n, 0.0);
    }
    HermitianOp::new(m, vec![0, 1])
}

/// Evolves `(|0⟩-|1⟩)/√2 ⊗ |0⟩` under [`norm_sum_hamiltonian`] for time `t` and
/// inverts the ancilla statistics, `p₁ = ½(sin²(|x_i|t) + sin²(|x_j|t))`.
pub fn estimate_norm_sum(
    xi: &[f64],
    xj: &[f64],
    t: f64,
    mode: NormSumMode,
    ledger: &mut ResourceLedger,
) -> Result<NormSumEstimate> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("t must be > 0, got {t}")));
    }
    let (ni, nj) = (norm(xi), norm(xj));
    if ni.max(nj) * t > SMALL_ANGLE_LIMIT {
        log::warn!("norm-sum estimate outside the small-angle regime: max|x|·t = {}", ni.max(nj) * t);
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let zero = C64::new(0.0, 0.0);
    let start = QState::from_amplitudes(vec![C64::new(r, 0.0), zero, C64::new(-r, 0.0), zero])?;
    let evolved = evolve(&start, &norm_sum_hamiltonian(ni, nj)?, t)?;
    let exact = evolved.probability_of(0, 1)?;
    let probability = match mode {
        NormSumMode::Exact => exact,
        NormSumMode::Sampled { shots, seed } => {
            if shots == 0 {
                return Err(Error::InvalidArgument("shots must be > 0".into()));
            }
            ledger.record_shots(shots);
            bernoulli_frequency(exact, shots, seed)
        }
    };
    Ok(NormSumEstimate {
        probability,
        estimate: 2.0 * probability / (t * t),
    })
}
