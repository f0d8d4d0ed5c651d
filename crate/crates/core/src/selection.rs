//! Grover-based selection over classifier outputs.
//!
//! * [`durr_hoyer_max`]: maximum finding over per-class scores by repeated
//!   Grover search above a moving threshold, with exponentially growing
//!   iteration guesses (growth factor 6/5, capped at √k).
//! * [`quantum_mode`]: mode finding over the pairwise vote list, driven by
//!   amplitude-estimation frequency counts ([`quantum_count`]).
//!
//! Every Grover iteration, oracle evaluation and measurement is charged to a
//! per-run [`ResourceLedger`].

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::pair_count;
use crate::error::{Error, Result};
use crate::ledger::ResourceLedger;
use crate::qclassify::{classify_pair, PairProbability};
use crate::statevector::{grover_iterate, phase_estimate, CMatrix, QState, C64};
use crate::sub_seed;

pub use crate::ledger::ResourceLedger as Ledger;

/// Largest class count accepted by the mode finder (vote register ≤ 7 qubits).
pub const MAX_MODE_CLASSES: usize = 16;

/// `22.5√k + 1.4 log₂²k`.
pub fn iteration_budget(k: usize) -> f64 {
    let k = k as f64;
    let l = k.log2();
    22.5 * k.sqrt() + 1.4 * l * l
}

/// Smallest index attaining the maximum.
pub fn classical_argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxFindOutcome {
    pub index: usize,
    pub ledger: ResourceLedger,
    /// Every index adopted as threshold, starting with the random initial one.
    pub thresholds: Vec<usize>,
    /// Oracle queries consumed when the threshold first reached the maximum.
    pub queries_to_max: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Stop {
    Budget(f64),
    AtMaximum,
}

/// Dürr-Høyer maximum finding. Each search round draws `j` uniformly below the
/// current guess `m`, runs `j` Grover iterations marking `{r : scores[r] >
/// scores[index]}`, measures, and spends one more oracle query to test the
/// measured index. The run ends once the Grover iterations spent exceed
/// `budget_multiplier · (22.5√k + 1.4 log₂²k)`.
pub fn durr_hoyer_max(scores: &[f64], seed: u64, budget_multiplier: f64) -> Result<MaxFindOutcome> {
    if !(budget_multiplier > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "budget multiplier must be > 0, got {budget_multiplier}"
        )));
    }
    durr_hoyer(scores, seed, Stop::Budget(budget_multiplier * iteration_budget(scores.len())))
}

/// The unbounded variant, run until the threshold holds the maximum. The stop
/// test uses the classical argmax purely as instrumentation.
pub fn durr_hoyer_until_max(scores: &[f64], seed: u64) -> Result<MaxFindOutcome> {
    durr_hoyer(scores, seed, Stop::AtMaximum)
}

fn durr_hoyer(scores: &[f64], seed: u64, stop: Stop) -> Result<MaxFindOutcome> {
    let k = scores.len();
    if k == 0 {
        return Err(Error::InvalidArgument("empty score list".into()));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidArgument("scores must be finite".into()));
    }
    let mut ledger = ResourceLedger::new();
    if k == 1 {
        return Ok(MaxFindOutcome {
            index: 0,
            ledger,
            thresholds: vec![0],
            queries_to_max: Some(0),
        });
    }
    let argmax = classical_argmax(scores);
    let best = scores[argmax];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut index = rng.random_range(0..k);
    let mut thresholds = vec![index];
    let mut queries_to_max = (scores[index] == best).then_some(0);
    let start = QState::uniform(k)?;
    let cap = (k as f64).sqrt();
    let mut guess = 1.0f64;
    loop {
        match stop {
            Stop::Budget(limit) if ledger.grover_iterations as f64 >= limit => break,
            Stop::AtMaximum if queries_to_max.is_some() => break,
            _ => {}
        }
        let j = rng.random_range(0..guess.ceil() as usize);
        let threshold = scores[index];
        let searched = grover_iterate(&start, |r| r < k && scores[r] > threshold, j, &mut ledger);
        let r = searched.sample_index(&mut rng);
        ledger.record_shots(1);
        ledger.record_oracle(1);
        if r < k && scores[r] > threshold {
            index = r;
            thresholds.push(r);
            guess = 1.0;
            if queries_to_max.is_none() && scores[r] == best {
                queries_to_max = Some(ledger.oracle_queries);
            }
        } else {
            guess = (guess * 6.0 / 5.0).min(cap);
        }
    }
    Ok(MaxFindOutcome {
        index,
        ledger,
        thresholds,
        queries_to_max,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoteList {
    votes: Vec<usize>,
    k: usize,
}

impl VoteList {
    pub fn new(votes: Vec<usize>, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Votes(format!("need at least 2 classes, got {k}")));
        }
        if votes.len() != pair_count(k) {
            return Err(Error::Votes(format!(
                "expected {} votes for k = {k}, got {}",
                pair_count(k),
                votes.len()
            )));
        }
        if let Some(bad) = votes.iter().find(|&&v| v == 0 || v > k) {
            return Err(Error::Votes(format!("vote {bad} outside 1..={k}")));
        }
        Ok(Self { votes, k })
    }

    /// A vote list of arbitrary length, for mode finding outside the
    /// pairwise setting. `k` is the class count.
    pub fn free(votes: Vec<usize>, k: usize) -> Result<Self> {
        if votes.is_empty() {
            return Err(Error::Votes("empty vote list".into()));
        }
        if let Some(bad) = votes.iter().find(|&&v| v == 0 || v > k) {
            return Err(Error::Votes(format!("vote {bad} outside 1..={k}")));
        }
        Ok(Self { votes, k })
    }

    pub fn votes(&self) -> &[usize] {
        &self.votes
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.votes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.votes.is_empty()
    }

    /// Vote count per class, index `c - 1` for class `c`.
    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.k];
        for &v in &self.votes {
            c[v - 1] += 1;
        }
        c
    }

    pub fn is_mode(&self, class: usize) -> bool {
        let counts = self.counts();
        let max = counts.iter().copied().max().unwrap_or(0);
        class >= 1 && class <= self.k && counts[class - 1] == max
    }
}

/// Collects the swap-test verdict of each pair. `results` must list every
/// pair exactly once in lexicographic order.
pub fn store_votes(k: usize, results: &[PairProbability]) -> Result<VoteList> {
    let mut expected = Vec::with_capacity(pair_count(k));
    for f in 1..=k {
        for s in (f + 1)..=k {
            expected.push((f, s));
        }
    }
    if results.len() != expected.len() {
        return Err(Error::Votes(format!(
            "expected {} pair results, got {}",
            expected.len(),
            results.len()
        )));
    }
    for (r, e) in results.iter().zip(&expected) {
        if (r.f, r.s) != *e {
            return Err(Error::Votes(format!(
                "pair ({}, {}) found where ({}, {}) was expected",
                r.f, r.s, e.0, e.1
            )));
        }
    }
    VoteList::new(results.iter().map(classify_pair).collect(), k)
}

/// Uniform superposition over the vote slots; padding slots carry no amplitude.
pub fn vote_superposition(v: &VoteList) -> Result<QState> {
    QState::uniform(v.len())
}

/// Dense Grover operator `(2|ψ⟩⟨ψ| - I)(I - 2Π)` where `Π` projects onto the
/// marked basis states.
pub fn grover_operator(start: &QState, marked: impl Fn(usize) -> bool) -> CMatrix {
    let dim = start.dim();
    let psi = start.amplitudes();
    CMatrix::from_fn(dim, dim, |r, c| {
        let reflect = 2.0 * psi[r] * psi[c].conj() - if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
        if marked(c) {
            -reflect
        } else {
            reflect
        }
    })
}

/// Exact output distribution of amplitude estimation for the fraction of vote
/// slots equal to `class`: phase estimation of the Grover operator on the
/// vote superposition, `precision` clock qubits.
pub fn count_distribution(v: &VoteList, class: usize, precision: usize) -> Result<Vec<f64>> {
    let start = vote_superposition(v)?;
    let votes = v.votes();
    let g = grover_operator(&start, |i| i < votes.len() && votes[i] == class);
    phase_estimate(&g, &start, precision)
}

/// Frequency value `sin²(π y / 2^t)` of clock reading `y`.
pub fn reading_to_fraction(y: usize, precision: usize) -> f64 {
    let s = (PI * y as f64 / (1u64 << precision) as f64).sin();
    s * s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountEstimate {
    /// `sin²(π y / 2^t)` for the sampled reading `y`.
    pub raw: f64,
    /// `raw` rounded to the nearest multiple of `1/len`.
    pub fraction: f64,
}

fn sample_reading<R: Rng + ?Sized>(dist: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (y, p) in dist.iter().enumerate() {
        acc += p;
        if u < acc {
            return y;
        }
    }
    dist.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

fn charge_count(ledger: &mut ResourceLedger, precision: usize) {
    ledger.record_oracle((1u64 << precision) - 1);
    ledger.record_qpe(precision as u64);
    ledger.record_shots(1);
}

fn snap(raw: f64, len: usize) -> f64 {
    (raw * len as f64).round() / len as f64
}

/// Amplitude-estimation count of `class` in the vote list.
pub fn quantum_count(
    v: &VoteList,
    class: usize,
    precision: usize,
    seed: u64,
    ledger: &mut ResourceLedger,
) -> Result<CountEstimate> {
    if class == 0 || class > v.k() {
        return Err(Error::InvalidArgument(format!("class {class} outside 1..={}", v.k())));
    }
    let dist = count_distribution(v, class, precision)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = reading_to_fraction(sample_reading(&dist, &mut rng), precision);
    charge_count(ledger, precision);
    Ok(CountEstimate {
        raw,
        fraction: snap(raw, v.len()),
    })
}

/// Smallest class id attaining the maximum vote count.
pub fn classical_mode(v: &VoteList) -> Result<usize> {
    if v.is_empty() {
        return Err(Error::Votes("empty vote list".into()));
    }
    Ok(classical_argmax(&v.counts().iter().map(|&c| c as f64).collect::<Vec<_>>()) + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeConfig {
    pub eps: f64,
    pub delta: f64,
    /// Rounds are `⌈round_factor · log₂ k⌉`.
    pub round_factor: f64,
    /// Clock width for the counts; `None` picks `⌈log₂ len⌉ + 4`.
    pub precision_qubits: Option<usize>,
}

impl Default for ModeConfig {
    fn default() -> Self {
        Self {
            eps: 0.1,
            delta: 0.1,
            round_factor: 3.0,
            precision_qubits: None,
        }
    }
}

impl ModeConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eps", self.eps), ("delta", self.delta)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidArgument(format!("{name} must be in (0, 1), got {v}")));
            }
        }
        if !(self.round_factor > 0.0) {
            return Err(Error::InvalidArgument("round factor must be > 0".into()));
        }
        if let Some(t) = self.precision_qubits {
            if !(1..=12).contains(&t) {
                return Err(Error::InvalidArgument(format!("precision qubits must be in 1..=12, got {t}")));
            }
        }
        Ok(())
    }

    pub fn rounds(&self, k: usize) -> usize {
        ((self.round_factor * (k as f64).log2()).ceil() as usize).max(1)
    }

    /// Independent counts combined by median for each frequency estimate.
    pub fn repetitions(&self) -> usize {
        2 * (1.0 / self.delta).ln().ceil() as usize + 1
    }

    pub fn precision_for(&self, len: usize) -> usize {
        self.precision_qubits
            .unwrap_or_else(|| (crate::statevector::qubits_for(len) + 4).min(12))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeOutcome {
    pub class: usize,
    pub estimate: f64,
    pub ledger: ResourceLedger,
}

/// Median-of-repetitions frequency counter with per-class distribution cache.
struct Counter<'a> {
    votes: &'a VoteList,
    precision: usize,
    reps: usize,
    cache: BTreeMap<usize, Vec<f64>>,
}

impl Counter<'_> {
    fn estimate<R: Rng + ?Sized>(&mut self, class: usize, rng: &mut R, ledger: &mut ResourceLedger) -> Result<f64> {
        if !self.cache.contains_key(&class) {
            let dist = count_distribution(self.votes, class, self.precision)?;
            self.cache.insert(class, dist);
        }
        let dist = &self.cache[&class];
        let mut samples: Vec<f64> = (0..self.reps)
            .map(|_| {
                charge_count(ledger, self.precision);
                snap(reading_to_fraction(sample_reading(dist, rng), self.precision), self.votes.len())
            })
            .collect();
        samples.sort_by(f64::total_cmp);
        Ok(samples[samples.len() / 2])
    }
}

/// Quantum mode finding over the vote list.
///
/// Starts from the class of a random slot and its estimated frequency `s`.
/// Each round re-estimates every class present, marks the slots whose class
/// estimate exceeds `s + eps/(k(k-1))`, Grover-searches the vote register for
/// them (iteration count tuned to the estimated marked fraction), measures a
/// slot and re-counts its class, adopting it when the estimate clears the same
/// threshold.
pub fn quantum_mode(v: &VoteList, cfg: &ModeConfig, seed: u64) -> Result<ModeOutcome> {
    cfg.validate()?;
    if v.is_empty() {
        return Err(Error::Votes("empty vote list".into()));
    }
    if v.k() > MAX_MODE_CLASSES {
        return Err(Error::Votes(format!(
            "mode finding supports at most {MAX_MODE_CLASSES} classes, got {}",
            v.k()
        )));
    }
    let k = v.k();
    let len = v.len();
    let votes = v.votes();
    let mut ledger = ResourceLedger::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counter = Counter {
        votes: v,
        precision: cfg.precision_for(len),
        reps: cfg.repetitions(),
        cache: BTreeMap::new(),
    };
    let start = vote_superposition(v)?;
    let threshold = cfg.eps / (k * (k - 1)).max(1) as f64;
    let present: Vec<usize> = {
        let mut p: Vec<usize> = votes.to_vec();
        p.sort_unstable();
        p.dedup();
        p
    };

    let mut class = votes[rng.random_range(0..len)];
    let mut estimate = counter.estimate(class, &mut rng, &mut ledger)?;

    for _ in 0..cfg.rounds(k) {
        let mut round = BTreeMap::new();
        for &c in &present {
            round.insert(c, counter.estimate(c, &mut rng, &mut ledger)?);
        }
        let better: Vec<usize> = present
            .iter()
            .copied()
            .filter(|c| round[c] > estimate + threshold)
            .collect();
        if better.is_empty() {
            continue;
        }
        let marked_fraction: f64 = better.iter().map(|c| round[c]).sum::<f64>().clamp(0.0, 1.0);
        let theta = marked_fraction.sqrt().asin();
        let iterations = if theta > 0.0 {
            (PI / (4.0 * theta) - 0.5).round().max(0.0) as usize
        } else {
            0
        };
        let searched = grover_iterate(
            &start,
            |i| i < len && better.contains(&votes[i]),
            iterations,
            &mut ledger,
        );
        let slot = searched.sample_index(&mut rng);
        ledger.record_shots(1);
        if slot >= len {
            continue;
        }
        let candidate = votes[slot];
        let fresh = counter.estimate(candidate, &mut rng, &mut ledger)?;
        if fresh > estimate + threshold {
            class = candidate;
            estimate = fresh;
        }
    }
    Ok(ModeOutcome { class, estimate, ledger })
}

/// `k` i.i.d. uniform scores in `[0, 1)`.
pub fn uniform_scores(k: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k).map(|_| rng.random()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub k: usize,
    pub trials: usize,
    /// Mean Grover oracle queries (one per Grover iteration) consumed by a
    /// budgeted run. Classical checks of measured indices are not included.
    pub mean_queries: f64,
    /// Fraction of budgeted runs returning the argmax.
    pub success_rate: f64,
}

/// Max-finding scaling benchmark over i.i.d. uniform scores. Trial `i` for
/// class count `k` uses sub-seeds of `seed` only, so rows are reproducible
/// and independent of thread scheduling.
pub fn max_finding_bench(ks: &[usize], trials: usize, seed: u64, budget_multiplier: f64) -> Result<Vec<BenchRow>> {
    use rayon::prelude::*;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be > 0".into()));
    }
    ks.iter()
        .map(|&k| {
            if k < 2 {
                return Err(Error::InvalidArgument(format!("k must be >= 2, got {k}")));
            }
            let results = (0..trials)
                .into_par_iter()
                .map(|i| {
                    let trial_seed = sub_seed(seed, ((k as u64) << 32) | i as u64);
                    let scores = uniform_scores(k, trial_seed);
                    let budgeted = durr_hoyer_max(&scores, sub_seed(trial_seed, 2), budget_multiplier)?;
                    let hit = budgeted.index == classical_argmax(&scores);
                    Ok((budgeted.ledger.grover_iterations, hit))
                })
                .collect::<Result<Vec<_>>>()?;
            let mean_queries = results.iter().map(|r| r.0 as f64).sum::<f64>() / trials as f64;
            let success_rate = results.iter().filter(|r| r.1).count() as f64 / trials as f64;
            Ok(BenchRow {
                k,
                trials,
                mean_queries,
                success_rate,
            })
        })
        .collect()
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("k,trials,mean_queries,success_rate\n");
    for r in rows {
        out.push_str(&format!("{},{},{:.6},{:.6}\n", r.k, r.trials, r.mean_queries, r.success_rate));
    }
    out
}

/// Exponent `b` of `mean_queries ≈ a·k^b`; `None` with fewer than two rows.
pub fn bench_exponent(rows: &[BenchRow]) -> Option<f64> {
    if rows.len() < 2 {
        return None;
    }
    let ks: Vec<f64> = rows.iter().map(|r| r.k as f64).collect();
    let qs: Vec<f64> = rows.iter().map(|r| r.mean_queries).collect();
    Some(crate::stats::fit_power_law(&ks, &qs).1)
}
