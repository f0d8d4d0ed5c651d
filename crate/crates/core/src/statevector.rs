//! Dense statevector simulator.
//!
//! Qubit `q` is bit `q` of the basis index (little-endian), so a register
//! built with [`QState::tensor`] places the left operand on the high qubits.
//! States are immutable values: every operation returns a new [`QState`].
//!
//! Besides gates and measurement this module carries the primitives the
//! quantum subroutines are built from: exact Hamiltonian evolution, Lie-Trotter
//! products, Grover iteration and phase estimation.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ledger::ResourceLedger;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub const MAX_QUBITS: usize = 24;
const NORM_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Qubits needed to index `len` slots; at least one.
pub fn qubits_for(len: usize) -> usize {
    let mut n = 1;
    while (1usize << n) < len {
        n += 1;
    }
    n
}

#[derive(Debug, Clone, PartialEq)]
pub struct QState {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl QState {
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        if index >= 1 << n_qubits {
            return Err(Error::QubitIndex(format!("basis index {index} out of range")));
        }
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[index] = ONE;
        Ok(Self { n_qubits, amps })
    }

    /// Wraps an already normalized amplitude vector of power-of-two length.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude vector length {len} is not a power of two >= 2"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_qubits(n_qubits)?;
        let norm = norm(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!("state norm {norm} is not 1")));
        }
        Ok(Self { n_qubits, amps })
    }

    /// Uniform superposition over the first `n_items` basis states of a
    /// `qubits_for(n_items)`-qubit register.
    pub fn uniform(n_items: usize) -> Result<Self> {
        if n_items == 0 {
            return Err(Error::InvalidArgument("uniform superposition over zero items".into()));
        }
        let n_qubits = qubits_for(n_items);
        check_qubits(n_qubits)?;
        let a = C64::new(1.0 / (n_items as f64).sqrt(), 0.0);
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[..n_items].fill(a);
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    /// `self ⊗ low`: `self` occupies the high qubits.
    pub fn tensor(&self, low: &QState) -> Result<QState> {
        let n = self.n_qubits + low.n_qubits;
        check_qubits(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        for a in &self.amps {
            amps.extend(low.amps.iter().map(|b| a * b));
        }
        Ok(QState { n_qubits: n, amps })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn fidelity(&self, other: &QState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Exact probability of reading `outcome` on `qubit`, without collapse.
    pub fn probability_of(&self, qubit: usize, outcome: u8) -> Result<f64> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        let want = if outcome == 0 { 0 } else { bit };
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit == want)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Distribution of the integer held by `qubits` (`qubits[0]` least significant).
    pub fn marginal(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        for &q in qubits {
            self.check_qubit(q)?;
        }
        let mut out = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            out[register_value(i, qubits)] += a.norm_sqr();
        }
        Ok(out)
    }

    /// Samples a full computational-basis measurement.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            acc += a.norm_sqr();
            if u < acc {
                return i;
            }
        }
        // rounding left u above the accumulated mass; take the last populated index
        self.amps.iter().rposition(|a| a.norm_sqr() > 0.0).unwrap_or(0)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::QubitIndex(format!("qubit {q} out of range for {} qubits", self.n_qubits)));
        }
        Ok(())
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCap(n));
    }
    Ok(())
}

fn norm(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn register_value(index: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &q)| acc | (((index >> q) & 1) << j))
}

/// Normalizes `v`, zero-pads it to the next power of two and returns the
/// resulting state on `qubits_for(v.len())` qubits.
pub fn amplitude_encode(v: &[f64]) -> Result<QState> {
    let c: Vec<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
    amplitude_encode_complex(&c)
}

pub fn amplitude_encode_complex(v: &[C64]) -> Result<QState> {
    if v.is_empty() {
        return Err(Error::ZeroVector);
    }
    let n = norm(v);
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroVector);
    }
    let n_qubits = qubits_for(v.len());
    check_qubits(n_qubits)?;
    let mut amps = vec![ZERO; 1 << n_qubits];
    for (a, x) in amps.iter_mut().zip(v) {
        *a = x / n;
    }
    Ok(QState { n_qubits, amps })
}

pub mod gates {
    use super::*;

    pub fn h() -> CMatrix {
        let s = 1.0 / 2f64.sqrt();
        CMatrix::from_row_slice(2, 2, &[C64::new(s, 0.0), C64::new(s, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0)])
    }

    pub fn x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
    }

    pub fn z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
    }

    /// `exp(-iθY/2)`.
    pub fn ry(theta: f64) -> CMatrix {
        let (s, c) = (theta / 2.0).sin_cos();
        CMatrix::from_row_slice(2, 2, &[C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)])
    }

    /// `diag(1, e^{iφ})`.
    pub fn phase(phi: f64) -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, C64::from_polar(1.0, phi)])
    }

    pub fn swap() -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = ONE;
        m[(1, 2)] = ONE;
        m[(2, 1)] = ONE;
        m[(3, 3)] = ONE;
        m
    }
}

fn unitarity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    (m.adjoint() * m - CMatrix::identity(n, n)).camax()
}

/// Applies `gate` on `targets` (local bit `j` of the gate index is
/// `targets[j]`), conditioned on every qubit in `controls` being 1.
pub fn apply_gate(q: &QState, gate: &CMatrix, targets: &[usize], controls: &[usize]) -> Result<QState> {
    check_layout(q.n_qubits, gate, targets, controls)?;
    let dev = unitarity_deviation(gate);
    if dev > UNITARY_TOL {
        return Err(Error::NotUnitary(dev));
    }
    let mut out = q.clone();
    apply_in_place(&mut out.amps, gate, targets, controls);
    Ok(out)
}

fn check_layout(n_qubits: usize, gate: &CMatrix, targets: &[usize], controls: &[usize]) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::QubitIndex("no target qubits".into()));
    }
    if gate.nrows() != gate.ncols() || gate.nrows() != 1 << targets.len() {
        return Err(Error::DimensionMismatch {
            expected: 1 << targets.len(),
            got: gate.nrows(),
        });
    }
    let mut used = 0usize;
    for &t in targets.iter().chain(controls) {
        if t >= n_qubits {
            return Err(Error::QubitIndex(format!("qubit {t} out of range for {n_qubits} qubits")));
        }
        if used & (1 << t) != 0 {
            return Err(Error::QubitIndex(format!("qubit {t} used twice")));
        }
        used |= 1 << t;
    }
    Ok(())
}

pub(crate) fn apply_in_place(amps: &mut [C64], gate: &CMatrix, targets: &[usize], controls: &[usize]) {
    let dim = 1usize << targets.len();
    let tmask: usize = targets.iter().map(|t| 1 << t).sum();
    let cmask: usize = controls.iter().map(|c| 1 << c).sum();
    let offsets: Vec<usize> = (0..dim)
        .map(|l| {
            targets
                .iter()
                .enumerate()
                .fold(0, |acc, (j, &t)| acc | (((l >> j) & 1) << t))
        })
        .collect();
    // row-major copy for the inner product loop
    let rows: Vec<C64> = (0..dim).flat_map(|r| (0..dim).map(move |c| (r, c))).map(|(r, c)| gate[(r, c)]).collect();
    let mut buf = vec![ZERO; dim];
    for base in 0..amps.len() {
        if base & tmask != 0 || base & cmask != cmask {
            continue;
        }
        for (b, off) in buf.iter_mut().zip(&offsets) {
            *b = amps[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            let row = &rows[r * dim..(r + 1) * dim];
            amps[base | off] = row.iter().zip(&buf).map(|(m, v)| m * v).sum();
        }
    }
}

/// Applies a different single-qubit gate on `target` for each value of the
/// `controls` register (`controls[0]` least significant).
pub(crate) fn apply_uniformly_controlled<F>(amps: &mut [C64], controls: &[usize], target: usize, gate_for: F)
where
    F: Fn(usize) -> [[C64; 2]; 2],
{
    let tbit = 1usize << target;
    let mut cache: Vec<Option<[[C64; 2]; 2]>> = vec![None; 1 << controls.len()];
    for base in 0..amps.len() {
        if base & tbit != 0 {
            continue;
        }
        let r = register_value(base, controls);
        let g = *cache[r].get_or_insert_with(|| gate_for(r));
        let (a0, a1) = (amps[base], amps[base | tbit]);
        amps[base] = g[0][0] * a0 + g[0][1] * a1;
        amps[base | tbit] = g[1][0] * a0 + g[1][1] * a1;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub outcome: u8,
    pub probability: f64,
    pub post_state: QState,
}

pub fn measure(q: &QState, qubit: usize, seed: u64) -> Result<MeasurementRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    measure_with(q, qubit, &mut rng)
}

pub fn measure_with<R: Rng + ?Sized>(q: &QState, qubit: usize, rng: &mut R) -> Result<MeasurementRecord> {
    let p1 = q.probability_of(qubit, 1)?;
    let u: f64 = rng.random();
    let outcome = u8::from(u < p1);
    let probability = if outcome == 1 { p1 } else { 1.0 - p1 };
    Ok(MeasurementRecord {
        outcome,
        probability,
        post_state: project(q, qubit, outcome)?,
    })
}

/// Projects `qubit` onto `outcome` and renormalizes.
pub fn project(q: &QState, qubit: usize, outcome: u8) -> Result<QState> {
    q.check_qubit(qubit)?;
    let bit = 1usize << qubit;
    let want = if outcome == 0 { 0 } else { bit };
    let mut amps: Vec<C64> = q
        .amps
        .iter()
        .enumerate()
        .map(|(i, &a)| if i & bit == want { a } else { ZERO })
        .collect();
    let n = norm(&amps);
    if n == 0.0 {
        return Err(Error::PostSelection(0.0));
    }
    amps.iter_mut().for_each(|a| *a /= n);
    Ok(QState {
        n_qubits: q.n_qubits,
        amps,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOp {
    matrix: CMatrix,
    targets: Vec<usize>,
}

impl HermitianOp {
    pub fn new(matrix: CMatrix, targets: Vec<usize>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() != 1 << targets.len() {
            return Err(Error::DimensionMismatch {
                expected: 1 << targets.len(),
                got: matrix.nrows(),
            });
        }
        let dev = (&matrix - matrix.adjoint()).camax();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { matrix, targets })
    }

    /// Operator on qubits `0..m` of an `m`-qubit register.
    pub fn on_low_qubits(matrix: CMatrix) -> Result<Self> {
        let dim = matrix.nrows();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::InvalidArgument(format!("operator dimension {dim} is not a power of two")));
        }
        let m = dim.trailing_zeros() as usize;
        Self::new(matrix, (0..m).collect())
    }

    pub fn from_real(matrix: &DMatrix<f64>, targets: Vec<usize>) -> Result<Self> {
        Self::new(matrix.map(|v| C64::new(v, 0.0)), targets)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// `exp(-iHt)`.
    pub fn exp_i(&self, t: f64) -> CMatrix {
        expm_hermitian(&self.matrix, t)
    }
}

/// `exp(-iHt)` for Hermitian `h` by eigendecomposition.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = CMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, -l * t)));
    v * phases * v.adjoint()
}

pub fn evolve(q: &QState, h: &HermitianOp, t: f64) -> Result<QState> {
    let u = h.exp_i(t);
    check_layout(q.n_qubits, &u, &h.targets, &[])?;
    let mut out = q.clone();
    apply_in_place(&mut out.amps, &u, &h.targets, &[]);
    Ok(out)
}

/// First-order product `(Π_k exp(-i T_k dt))^steps`, term 0 applied first.
pub fn trotter_exp(terms: &[HermitianOp], dt: f64, steps: usize) -> Result<CMatrix> {
    let first = terms
        .first()
        .ok_or_else(|| Error::InvalidArgument("no Trotter terms".into()))?;
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be >= 1".into()));
    }
    let dim = first.dim();
    let mut step = CMatrix::identity(dim, dim);
    for term in terms {
        if term.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: term.dim(),
            });
        }
        step = term.exp_i(dt) * step;
    }
    Ok(matrix_power(&step, steps))
}

pub(crate) fn matrix_power(m: &CMatrix, mut e: usize) -> CMatrix {
    let n = m.nrows();
    let mut result = CMatrix::identity(n, n);
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Spectral norm (largest singular value).
pub fn spectral_norm(m: &CMatrix) -> f64 {
    m.clone().singular_values().max()
}

/// Total probability on basis states selected by `marked`.
pub fn marked_probability(q: &QState, marked: impl Fn(usize) -> bool) -> f64 {
    q.amps
        .iter()
        .enumerate()
        .filter(|(i, _)| marked(*i))
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Amplitude amplification with `q` as both the start state and the axis of
/// the diffusion reflection: applies `(D·O)^iterations` where `O` flips the
/// sign of marked basis states and `D = 2|q⟩⟨q| - I`. Starting from the
/// uniform superposition over N items with m marked, the marked mass after
/// j iterations is `sin²((2j+1)θ)`, `sin²θ = m/N`.
///
/// With nothing marked the oracle is the identity and `q` is returned
/// unrotated. Each iteration costs one oracle query in `ledger`.
pub fn grover_iterate(
    q: &QState,
    marked: impl Fn(usize) -> bool,
    iterations: usize,
    ledger: &mut ResourceLedger,
) -> QState {
    let flags: Vec<bool> = (0..q.dim()).map(&marked).collect();
    let mut amps = q.amps.clone();
    for _ in 0..iterations {
        for (a, &m) in amps.iter_mut().zip(&flags) {
            if m {
                *a = -*a;
            }
        }
        let overlap: C64 = q.amps.iter().zip(&amps).map(|(s, a)| s.conj() * a).sum();
        for (a, s) in amps.iter_mut().zip(&q.amps) {
            *a = 2.0 * overlap * s - *a;
        }
    }
    ledger.record_grover(iterations as u64);
    QState {
        n_qubits: q.n_qubits,
        amps,
    }
}

/// Quantum Fourier transform on `qubits` (`qubits[0]` least significant):
/// `|x⟩ -> 2^{-n/2} Σ_y e^{2πi xy/2^n} |y⟩`.
pub(crate) fn qft_in_place(amps: &mut [C64], qubits: &[usize]) {
    let n = qubits.len();
    let h = gates::h();
    for i in (0..n).rev() {
        apply_in_place(amps, &h, &[qubits[i]], &[]);
        for j in (0..i).rev() {
            let phi = PI / (1u64 << (i - j)) as f64;
            apply_in_place(amps, &gates::phase(phi), &[qubits[i]], &[qubits[j]]);
        }
    }
    let sw = gates::swap();
    for i in 0..n / 2 {
        apply_in_place(amps, &sw, &[qubits[i], qubits[n - 1 - i]], &[]);
    }
}

pub(crate) fn inverse_qft_in_place(amps: &mut [C64], qubits: &[usize]) {
    let n = qubits.len();
    let h = gates::h();
    let sw = gates::swap();
    for i in 0..n / 2 {
        apply_in_place(amps, &sw, &[qubits[i], qubits[n - 1 - i]], &[]);
    }
    for i in 0..n {
        for j in 0..i {
            let phi = -PI / (1u64 << (i - j)) as f64;
            apply_in_place(amps, &gates::phase(phi), &[qubits[i]], &[qubits[j]]);
        }
        apply_in_place(amps, &h, &[qubits[i]], &[]);
    }
}

pub fn qft(q: &QState, qubits: &[usize]) -> Result<QState> {
    check_layout(q.n_qubits, &CMatrix::identity(1 << qubits.len(), 1 << qubits.len()), qubits, &[])?;
    let mut out = q.clone();
    qft_in_place(&mut out.amps, qubits);
    Ok(out)
}

pub fn inverse_qft(q: &QState, qubits: &[usize]) -> Result<QState> {
    check_layout(q.n_qubits, &CMatrix::identity(1 << qubits.len(), 1 << qubits.len()), qubits, &[])?;
    let mut out = q.clone();
    inverse_qft_in_place(&mut out.amps, qubits);
    Ok(out)
}

/// `U^{2^j}` for `j` in `0..count`.
pub(crate) fn doubling_powers(u: &CMatrix, count: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(count);
    let mut p = u.clone();
    for j in 0..count {
        if j > 0 {
            p = &p * &p;
        }
        out.push(p.clone());
    }
    out
}

/// Forward phase-estimation circuit: Hadamards on `clock`, the
/// controlled-`U^{2^j}` ladder (clock qubit `j` controls `powers[j]` on
/// `system`), then the inverse QFT on `clock`.
pub(crate) fn qpe_forward(amps: &mut [C64], powers: &[CMatrix], system: &[usize], clock: &[usize]) {
    let h = gates::h();
    for &c in clock {
        apply_in_place(amps, &h, &[c], &[]);
    }
    for (j, &c) in clock.iter().enumerate() {
        apply_in_place(amps, &powers[j], system, &[c]);
    }
    inverse_qft_in_place(amps, clock);
}

/// Exact inverse of [`qpe_forward`] given the adjoint powers.
pub(crate) fn qpe_backward(amps: &mut [C64], inverse_powers: &[CMatrix], system: &[usize], clock: &[usize]) {
    qft_in_place(amps, clock);
    for (j, &c) in clock.iter().enumerate().rev() {
        apply_in_place(amps, &inverse_powers[j], system, &[c]);
    }
    let h = gates::h();
    for &c in clock {
        apply_in_place(amps, &h, &[c], &[]);
    }
}

/// Runs the textbook phase-estimation circuit on `input` and returns the exact
/// distribution over the `precision`-bit readings; reading `r` corresponds to
/// phase `r / 2^precision` of an eigenvalue `e^{2πiφ}`.
pub fn phase_estimate(u: &CMatrix, input: &QState, precision: usize) -> Result<Vec<f64>> {
    if precision == 0 {
        return Err(Error::InvalidArgument("precision qubits must be >= 1".into()));
    }
    if u.nrows() != input.dim() || u.ncols() != input.dim() {
        return Err(Error::DimensionMismatch {
            expected: input.dim(),
            got: u.nrows(),
        });
    }
    let dev = unitarity_deviation(u);
    if dev > UNITARY_TOL {
        return Err(Error::NotUnitary(dev));
    }
    let m = input.n_qubits;
    let clock_reg = QState::zero(precision)?;
    let mut joint = clock_reg.tensor(input)?;
    let system: Vec<usize> = (0..m).collect();
    let clock: Vec<usize> = (m..m + precision).collect();
    let powers = doubling_powers(u, precision);
    qpe_forward(&mut joint.amps, &powers, &system, &clock);
    joint.marginal(&clock)
}
