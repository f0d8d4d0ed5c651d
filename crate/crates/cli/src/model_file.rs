//! JSON model persistence.

use std::fs;
use std::path::Path;

use qallpair::dataset::{pair_subsets, Dataset, LabeledExample};
use qallpair::lssvm::{KernelSpec, LssvmModel};
use qallpair::multiclass::{Ensemble, Strategy, TrainingMode};
use qallpair::qtrain::InversionConfig;
use qallpair::ResourceLedger;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredModel {
    pub f: usize,
    /// Zero for one-vs-all models.
    pub s: usize,
    pub b: f64,
    pub alpha: Vec<f64>,
}

/// Everything needed to rebuild an ensemble. Support vectors are not stored
/// per model; they are re-derived from the training set, which fixes their
/// order exactly as at training time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub created_by: String,
    pub seed: Option<u64>,
    pub strategy: Strategy,
    pub training_mode: TrainingMode,
    pub kernel: KernelSpec,
    pub gamma: f64,
    pub normalize: bool,
    pub inversion: Option<InversionConfig>,
    pub k: usize,
    pub d: usize,
    /// Original label of class `i` at position `i - 1`.
    pub labels: Vec<String>,
    pub training_ledger: ResourceLedger,
    pub training_set: Vec<LabeledExample>,
    pub models: Vec<StoredModel>,
}

impl ModelFile {
    pub fn new(
        ens: &Ensemble,
        training: &Dataset,
        labels: Vec<String>,
        normalize: bool,
        seed: Option<u64>,
    ) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            created_by: concat!("qallpair ", env!("CARGO_PKG_VERSION")).to_string(),
            seed,
            strategy: ens.strategy,
            training_mode: ens.training_mode,
            kernel: ens.kernel,
            gamma: ens.gamma,
            normalize,
            inversion: None,
            k: ens.k,
            d: ens.d,
            labels,
            training_ledger: ens.ledger,
            training_set: training.examples().to_vec(),
            models: ens
                .models
                .iter()
                .map(|m| StoredModel {
                    f: m.pair.0,
                    s: m.pair.1,
                    b: m.b,
                    alpha: m.alpha.clone(),
                })
                .collect(),
        }
    }

    pub fn to_ensemble(&self) -> CliResult<Ensemble> {
        let invalid = |msg: String| CliError::Runtime(format!("invalid model file: {msg}"));
        if self.labels.len() != self.k {
            return Err(invalid(format!("{} labels for {} classes", self.labels.len(), self.k)));
        }
        let ds = Dataset::with_classes(self.training_set.clone(), self.k).map_err(|e| invalid(e.to_string()))?;
        let supports: Vec<Vec<Vec<f64>>> = match self.strategy {
            Strategy::AllPair => pair_subsets(&ds)
                .into_iter()
                .map(|p| p.examples.into_iter().map(|e| e.features).collect())
                .collect(),
            Strategy::OneVsAll => {
                let all: Vec<Vec<f64>> = ds.examples().iter().map(|e| e.features.clone()).collect();
                vec![all; self.k]
            }
        };
        if supports.len() != self.models.len() {
            return Err(invalid(format!(
                "expected {} models, found {}",
                supports.len(),
                self.models.len()
            )));
        }
        let models = self
            .models
            .iter()
            .zip(supports)
            .map(|(m, support)| {
                if m.alpha.len() != support.len() {
                    return Err(invalid(format!(
                        "model ({}, {}) has {} multipliers for {} training points",
                        m.f,
                        m.s,
                        m.alpha.len(),
                        support.len()
                    )));
                }
                Ok(LssvmModel {
                    b: m.b,
                    alpha: m.alpha.clone(),
                    gamma: self.gamma,
                    kernel: self.kernel,
                    pair: (m.f, m.s),
                    support,
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        let mut ens = Ensemble::from_models(
            self.strategy,
            models,
            self.k,
            self.d,
            self.training_mode,
            self.kernel,
            self.gamma,
        )
        .map_err(|e| invalid(e.to_string()))?;
        ens.ledger = self.training_ledger;
        Ok(ens)
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        let json = serde_json::to_string_pretty(self).map_err(|e| CliError::Runtime(e.to_string()))?;
        fs::write(path, json + "\n")
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text =
            fs::read_to_string(path).map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
        let file: ModelFile = serde_json::from_str(&text)
            .map_err(|e| CliError::Runtime(format!("invalid model file {}: {e}", path.display())))?;
        if file.format_version != FORMAT_VERSION {
            return Err(CliError::Runtime(format!(
                "unsupported model format version {} (expected {FORMAT_VERSION})",
                file.format_version
            )));
        }
        Ok(file)
    }
}
