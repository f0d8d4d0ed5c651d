//! All-pair and one-vs-all ensembles: training, end-to-end prediction through
//! the swap-test path, and evaluation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{pair_count, pair_subsets, Dataset, LabeledExample, PairSubset};
use crate::error::{Error, Result};
use crate::ledger::ResourceLedger;
use crate::lssvm::{gram_matrix, train_pair, KernelSpec, LssvmModel};
use crate::qclassify::{
    build_query_state, build_training_state, classify_pair, pair_probability, PairProbability, ProbabilityMode,
    TrainingState,
};
use crate::qtrain::{build_fhat, extract_solution, quantum_solve, InversionConfig};
use crate::selection::{classical_argmax, classical_mode, durr_hoyer_max, quantum_mode, ModeConfig, VoteList};
use crate::statevector::qubits_for;
use crate::sub_seed;

/// Largest solution register (`⌈log₂(M+1)⌉` qubits) accepted by quantum training.
pub const MAX_SOLUTION_QUBITS: usize = 7;

/// Gauge values above this are logged as a poorly satisfied `Σα = 0`.
const GAUGE_WARNING: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    AllPair,
    OneVsAll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrainingMode {
    Classical,
    Quantum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub gamma: f64,
    pub kernel: KernelSpec,
    pub mode: TrainingMode,
    pub inversion: InversionConfig,
}

impl TrainConfig {
    pub fn classical(gamma: f64, kernel: KernelSpec) -> Self {
        Self {
            gamma,
            kernel,
            mode: TrainingMode::Classical,
            inversion: InversionConfig::default(),
        }
    }

    pub fn quantum(gamma: f64, inversion: InversionConfig) -> Self {
        Self {
            gamma,
            kernel: KernelSpec::Linear,
            mode: TrainingMode::Quantum,
            inversion,
        }
    }
}

/// Trained binary classifiers plus the metadata shared by both strategies.
/// All-pair models are stored in lexicographic pair order; one-vs-all model
/// `i` separates class `i + 1` from the rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub strategy: Strategy,
    pub models: Vec<LssvmModel>,
    pub k: usize,
    pub d: usize,
    pub training_mode: TrainingMode,
    pub kernel: KernelSpec,
    pub gamma: f64,
    /// Resources spent by quantum training; zero for classical training.
    pub ledger: ResourceLedger,
}

pub type AllPairEnsemble = Ensemble;
pub type OneVsAllEnsemble = Ensemble;

impl Ensemble {
    /// Rebuilds an ensemble from stored models, checking the structural invariants.
    pub fn from_models(
        strategy: Strategy,
        models: Vec<LssvmModel>,
        k: usize,
        d: usize,
        training_mode: TrainingMode,
        kernel: KernelSpec,
        gamma: f64,
    ) -> Result<Self> {
        let expected: Vec<(usize, usize)> = match strategy {
            Strategy::AllPair => (1..=k).flat_map(|f| ((f + 1)..=k).map(move |s| (f, s))).collect(),
            Strategy::OneVsAll => (1..=k).map(|c| (c, 0)).collect(),
        };
        if k < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 classes, got {k}")));
        }
        if models.len() != expected.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} models for k = {k}, got {}",
                expected.len(),
                models.len()
            )));
        }
        for (m, e) in models.iter().zip(&expected) {
            if m.pair != *e {
                return Err(Error::InvalidArgument(format!(
                    "model for {:?} found where {:?} was expected",
                    m.pair, e
                )));
            }
            if m.d() != d || m.alpha.len() != m.support.len() {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: m.d(),
                });
            }
        }
        Ok(Self {
            strategy,
            models,
            k,
            d,
            training_mode,
            kernel,
            gamma,
            ledger: ResourceLedger::new(),
        })
    }
}

fn train_subset(subset: &PairSubset, cfg: &TrainConfig) -> Result<(LssvmModel, ResourceLedger)> {
    match cfg.mode {
        TrainingMode::Classical => Ok((train_pair(subset, cfg.kernel, cfg.gamma)?, ResourceLedger::new())),
        TrainingMode::Quantum => {
            if cfg.kernel != KernelSpec::Linear {
                return Err(Error::KernelUnsupported);
            }
            let q = qubits_for(subset.len() + 1);
            if q > MAX_SOLUTION_QUBITS {
                return Err(Error::RegisterCap {
                    f: subset.f,
                    s: subset.s,
                    points: subset.len(),
                    cap: MAX_SOLUTION_QUBITS,
                });
            }
            let fhat = build_fhat(&gram_matrix(subset, cfg.kernel)?, cfg.gamma)?;
            let sol = quantum_solve(&fhat, &subset.binary_labels, &cfg.inversion)?;
            let (b, alpha, gauge) = extract_solution(&fhat, &subset.binary_labels, &sol.state)?;
            if gauge > GAUGE_WARNING {
                log::warn!("pair ({}, {}): extracted multipliers violate Σα = 0 by {gauge:.3e}", subset.f, subset.s);
            }
            let model = LssvmModel {
                b,
                alpha,
                gamma: cfg.gamma,
                kernel: cfg.kernel,
                pair: (subset.f, subset.s),
                support: subset.examples.iter().map(|e| e.features.clone()).collect(),
            };
            Ok((model, sol.ledger))
        }
    }
}

fn train_subsets(strategy: Strategy, ds: &Dataset, subsets: Vec<PairSubset>, cfg: &TrainConfig) -> Result<Ensemble> {
    if cfg.mode == TrainingMode::Quantum && cfg.kernel != KernelSpec::Linear {
        return Err(Error::KernelUnsupported);
    }
    let trained = subsets
        .par_iter()
        .map(|s| train_subset(s, cfg))
        .collect::<Result<Vec<_>>>()?;
    let ledger = trained.iter().map(|t| t.1).sum();
    Ok(Ensemble {
        strategy,
        models: trained.into_iter().map(|t| t.0).collect(),
        k: ds.k(),
        d: ds.d(),
        training_mode: cfg.mode,
        kernel: cfg.kernel,
        gamma: cfg.gamma,
        ledger,
    })
}

/// Trains one classifier per unordered class pair.
pub fn train_all_pair(ds: &Dataset, cfg: &TrainConfig) -> Result<AllPairEnsemble> {
    if ds.k() < 2 {
        return Err(Error::InvalidArgument("all-pair training needs at least 2 classes".into()));
    }
    train_subsets(Strategy::AllPair, ds, pair_subsets(ds), cfg)
}

/// Trains one class-versus-rest classifier per class (+1 for the class).
pub fn train_one_vs_all(ds: &Dataset, cfg: &TrainConfig) -> Result<OneVsAllEnsemble> {
    if ds.k() < 2 {
        return Err(Error::InvalidArgument("one-vs-all training needs at least 2 classes".into()));
    }
    let subsets = (1..=ds.k())
        .map(|c| {
            let examples: Vec<LabeledExample> = ds.examples().to_vec();
            let binary_labels = examples.iter().map(|e| if e.label == c { 1.0 } else { -1.0 }).collect();
            PairSubset {
                f: c,
                s: 0,
                examples,
                binary_labels,
            }
        })
        .collect();
    train_subsets(Strategy::OneVsAll, ds, subsets, cfg)
}

pub fn train(ds: &Dataset, strategy: Strategy, cfg: &TrainConfig) -> Result<Ensemble> {
    match strategy {
        Strategy::AllPair => train_all_pair(ds, cfg),
        Strategy::OneVsAll => train_one_vs_all(ds, cfg),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Finder {
    /// Quantum mode finding (all-pair) or Dürr-Høyer max finding (one-vs-all).
    Quantum,
    /// Classical mode or argmax, smallest class on ties.
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictConfig {
    pub probability: ProbabilityMode,
    pub finder: Finder,
    pub mode: ModeConfig,
    pub budget_multiplier: f64,
}

impl Default for PredictConfig {
    fn default() -> Self {
        Self {
            probability: ProbabilityMode::Exact,
            finder: Finder::Classical,
            mode: ModeConfig::default(),
            budget_multiplier: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionTrace {
    pub probabilities: Vec<PairProbability>,
    /// One-vs-all confidence scores `1 - P_i`; empty for all-pair.
    pub scores: Vec<f64>,
    /// Pairwise votes; empty for one-vs-all.
    pub votes: Vec<usize>,
    pub class: usize,
    /// Set when the winning vote count or score is shared by several classes.
    pub low_margin: bool,
    pub ledger: ResourceLedger,
}

/// Swap-test states of every model, built once per ensemble.
pub struct PreparedEnsemble<'a> {
    ens: &'a Ensemble,
    states: Vec<TrainingState>,
}

impl<'a> PreparedEnsemble<'a> {
    pub fn new(ens: &'a Ensemble) -> Result<Self> {
        let states = ens.models.iter().map(build_training_state).collect::<Result<Vec<_>>>()?;
        Ok(Self { ens, states })
    }

    pub fn ensemble(&self) -> &Ensemble {
        self.ens
    }

    fn probabilities(&self, x: &[f64], cfg: &PredictConfig, seed: u64) -> Result<(Vec<PairProbability>, ResourceLedger)> {
        if x.len() != self.ens.d {
            return Err(Error::DimensionMismatch {
                expected: self.ens.d,
                got: x.len(),
            });
        }
        let results = self
            .ens
            .models
            .par_iter()
            .zip(&self.states)
            .enumerate()
            .map(|(i, (m, u))| {
                let mut ledger = ResourceLedger::new();
                let q = build_query_state(x, m.alpha.len())?;
                let p = pair_probability(u, &q, m.pair, cfg.probability, sub_seed(seed, i as u64), &mut ledger)?;
                Ok((p, ledger))
            })
            .collect::<Result<Vec<_>>>()?;
        let ledger = results.iter().map(|r| r.1).sum();
        Ok((results.into_iter().map(|r| r.0).collect(), ledger))
    }

    pub fn predict(&self, x: &[f64], cfg: &PredictConfig, seed: u64) -> Result<PredictionTrace> {
        match self.ens.strategy {
            Strategy::AllPair => self.predict_all_pair(x, cfg, seed),
            Strategy::OneVsAll => self.predict_one_vs_all(x, cfg, seed),
        }
    }

    fn predict_all_pair(&self, x: &[f64], cfg: &PredictConfig, seed: u64) -> Result<PredictionTrace> {
        let k = self.ens.k;
        let (probabilities, mut ledger) = self.probabilities(x, cfg, seed)?;
        let votes = VoteList::new(probabilities.iter().map(classify_pair).collect(), k)?;
        let class = if votes.len() == 1 {
            votes.votes()[0]
        } else {
            match cfg.finder {
                Finder::Classical => classical_mode(&votes)?,
                Finder::Quantum => {
                    let out = quantum_mode(&votes, &cfg.mode, sub_seed(seed, pair_count(k) as u64))?;
                    ledger += out.ledger;
                    out.class
                }
            }
        };
        let counts = votes.counts();
        let top = counts.iter().copied().max().unwrap_or(0);
        Ok(PredictionTrace {
            probabilities,
            scores: Vec::new(),
            low_margin: counts.iter().filter(|&&c| c == top).count() > 1,
            votes: votes.votes().to_vec(),
            class,
            ledger,
        })
    }

    fn predict_one_vs_all(&self, x: &[f64], cfg: &PredictConfig, seed: u64) -> Result<PredictionTrace> {
        let (probabilities, mut ledger) = self.probabilities(x, cfg, seed)?;
        let scores: Vec<f64> = probabilities.iter().map(|p| 1.0 - p.p).collect();
        let index = match cfg.finder {
            Finder::Classical => classical_argmax(&scores),
            Finder::Quantum => {
                let out = durr_hoyer_max(&scores, sub_seed(seed, self.ens.k as u64), cfg.budget_multiplier)?;
                ledger += out.ledger;
                out.index
            }
        };
        let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(PredictionTrace {
            probabilities,
            low_margin: scores.iter().filter(|&&s| s == top).count() > 1,
            scores,
            votes: Vec::new(),
            class: index + 1,
            ledger,
        })
    }
}

pub fn predict_all_pair(ens: &AllPairEnsemble, x: &[f64], cfg: &PredictConfig, seed: u64) -> Result<PredictionTrace> {
    if ens.strategy != Strategy::AllPair {
        return Err(Error::InvalidArgument("not an all-pair ensemble".into()));
    }
    PreparedEnsemble::new(ens)?.predict(x, cfg, seed)
}

pub fn predict_one_vs_all(ens: &OneVsAllEnsemble, x: &[f64], cfg: &PredictConfig, seed: u64) -> Result<PredictionTrace> {
    if ens.strategy != Strategy::OneVsAll {
        return Err(Error::InvalidArgument("not a one-vs-all ensemble".into()));
    }
    PreparedEnsemble::new(ens)?.predict(x, cfg, seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub accuracy: f64,
    /// `confusion[t][p]` counts points of class `t + 1` predicted as `p + 1`.
    pub confusion: Vec<Vec<usize>>,
    pub predictions: Vec<usize>,
    pub ledger: ResourceLedger,
}

/// Predicts every test point (point `i` uses sub-seed `i` of `seed`).
pub fn evaluate(ens: &Ensemble, test: &Dataset, cfg: &PredictConfig, seed: u64) -> Result<Evaluation> {
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    if test.d() != ens.d {
        return Err(Error::DimensionMismatch {
            expected: ens.d,
            got: test.d(),
        });
    }
    if let Some(bad) = test.examples().iter().find(|e| e.label > ens.k) {
        return Err(Error::InvalidArgument(format!(
            "test label {} outside the model's {} classes",
            bad.label, ens.k
        )));
    }
    let prepared = PreparedEnsemble::new(ens)?;
    let traces = test
        .examples()
        .iter()
        .enumerate()
        .map(|(i, e)| prepared.predict(&e.features, cfg, sub_seed(seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(score(ens.k, test, traces.iter().map(|t| t.class).collect(), traces.iter().map(|t| t.ledger).sum()))
}

/// Accuracy and confusion matrix of `predictions` against the labels of `test`.
pub fn score(k: usize, test: &Dataset, predictions: Vec<usize>, ledger: ResourceLedger) -> Evaluation {
    let mut confusion = vec![vec![0; k]; k];
    let mut correct = 0;
    for (e, &p) in test.examples().iter().zip(&predictions) {
        confusion[e.label - 1][p - 1] += 1;
        correct += usize::from(e.label == p);
    }
    Evaluation {
        accuracy: correct as f64 / test.len() as f64,
        confusion,
        predictions,
        ledger,
    }
}
