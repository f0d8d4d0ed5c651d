//! `train`, `predict` and `evaluate`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use qallpair::dataset::{load_csv_mapped, load_features, unit_normalize, Dataset, LabeledExample};
use qallpair::lssvm::KernelSpec;
use qallpair::multiclass::{
    score, train, Finder, PredictConfig, PredictionTrace, PreparedEnsemble, Strategy, TrainConfig, TrainingMode,
};
use qallpair::qclassify::{shots_for_accuracy, ProbabilityMode};
use qallpair::qtrain::InversionConfig;
use qallpair::selection::ModeConfig;
use qallpair::{sub_seed, ResourceLedger};
use serde::Serialize;

use crate::args::{EvaluateArgs, FinderArg, KernelArg, PredictArgs, PredictOptions, ProbabilityArg, StrategyArg, TrainArgs, TrainingModeArg};
use crate::error::{usage, CliError, CliResult};
use crate::model_file::ModelFile;

pub fn train_cmd(args: &TrainArgs, out: &mut dyn Write) -> CliResult<()> {
    let kernel = match args.kernel {
        KernelArg::Linear => KernelSpec::Linear,
        KernelArg::Rbf => KernelSpec::rbf(args.sigma).map_err(|e| usage(e.to_string()))?,
    };
    if !(args.gamma > 0.0 && args.gamma.is_finite()) {
        return Err(usage(format!("--gamma must be a positive number, got {}", args.gamma)));
    }
    let mode = match args.mode {
        TrainingModeArg::Classical => TrainingMode::Classical,
        TrainingModeArg::Quantum => TrainingMode::Quantum,
    };
    let inversion = InversionConfig {
        precision_qubits: args.precision_qubits,
        eps_kr: args.eps_kr,
        t0: args.t0.unwrap_or(PI),
        ..Default::default()
    };
    if mode == TrainingMode::Quantum {
        inversion.validate().map_err(|e| usage(e.to_string()))?;
        if kernel != KernelSpec::Linear {
            return Err(usage("quantum training supports only --kernel linear"));
        }
        if args.seed.is_none() {
            return Err(usage("quantum training needs --seed (or QALLPAIR_SEED)"));
        }
    }
    let strategy = match args.strategy {
        StrategyArg::AllPair => Strategy::AllPair,
        StrategyArg::OneVsAll => Strategy::OneVsAll,
    };

    let (ds, labels) = load_csv_mapped(&args.data)?;
    let ds = if args.normalize { unit_normalize(&ds)? } else { ds };
    log::info!("loaded {} examples in {} classes from {}", ds.len(), ds.k(), args.data.display());
    let cfg = TrainConfig {
        gamma: args.gamma,
        kernel,
        mode,
        inversion,
    };
    let ens = train(&ds, strategy, &cfg)?;
    let mut file = ModelFile::new(&ens, &ds, labels, args.normalize, args.seed);
    if mode == TrainingMode::Quantum {
        file.inversion = Some(inversion);
    }
    file.save(&args.out)?;
    writeln!(
        out,
        "trained {} models (k = {}, d = {}, {} examples) -> {}",
        ens.models.len(),
        ens.k,
        ens.d,
        ds.len(),
        args.out.display()
    )?;
    if mode == TrainingMode::Quantum {
        writeln!(out, "training ledger: {}", ledger_line(&ens.ledger))?;
    }
    Ok(())
}

pub(crate) fn ledger_line(l: &ResourceLedger) -> String {
    format!(
        "grover_iterations={} oracle_queries={} measurement_shots={} qpe_qubits_used={}",
        l.grover_iterations, l.oracle_queries, l.measurement_shots, l.qpe_qubits_used
    )
}

/// Turns prediction flags into a configuration plus the seed to use.
pub fn predict_config(opts: &PredictOptions) -> CliResult<(PredictConfig, u64)> {
    let probability = match opts.probability {
        ProbabilityArg::Exact => {
            if opts.shots.is_some() || opts.eps.is_some() {
                return Err(usage("--shots and --eps apply only to --probability sampled"));
            }
            ProbabilityMode::Exact
        }
        ProbabilityArg::Sampled => {
            let shots = match (opts.shots, opts.eps) {
                (Some(0), _) => return Err(usage("--shots must be at least 1")),
                (Some(n), _) => n,
                (None, Some(eps)) => {
                    if !(eps > 0.0 && eps < 0.5) {
                        return Err(usage(format!("--eps must be in (0, 0.5), got {eps}")));
                    }
                    shots_for_accuracy(0.5, eps).map_err(|e| usage(e.to_string()))?
                }
                (None, None) => return Err(usage("--probability sampled needs --shots or --eps")),
            };
            ProbabilityMode::Sampled { shots }
        }
    };
    let finder = match opts.mode_finder {
        FinderArg::Quantum => Finder::Quantum,
        FinderArg::Classical => Finder::Classical,
    };
    let mode = ModeConfig {
        eps: opts.mode_eps,
        delta: opts.delta,
        ..Default::default()
    };
    mode.validate().map_err(|e| usage(e.to_string()))?;
    if !(opts.budget_multiplier > 0.0 && opts.budget_multiplier.is_finite()) {
        return Err(usage(format!(
            "--budget-multiplier must be positive, got {}",
            opts.budget_multiplier
        )));
    }
    let stochastic = probability != ProbabilityMode::Exact || finder == Finder::Quantum;
    let seed = match (opts.seed, stochastic) {
        (Some(s), _) => s,
        (None, false) => 0,
        (None, true) => {
            return Err(usage(
                "sampled probabilities and the quantum finder need --seed (or QALLPAIR_SEED)",
            ))
        }
    };
    Ok((
        PredictConfig {
            probability,
            finder,
            mode,
            budget_multiplier: opts.budget_multiplier,
        },
        seed,
    ))
}

fn normalize_row(x: &[f64], row: usize) -> CliResult<Vec<f64>> {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n == 0.0 {
        return Err(CliError::Runtime(format!("row {row}: zero feature vector cannot be normalized")));
    }
    Ok(x.iter().map(|v| v / n).collect())
}

#[derive(Serialize)]
struct TraceRecord<'a> {
    row: usize,
    label: &'a str,
    #[serde(flatten)]
    trace: &'a PredictionTrace,
}

struct Predictions {
    traces: Vec<PredictionTrace>,
    labels: Option<Vec<String>>,
}

fn run_predictions(opts: &PredictOptions) -> CliResult<(ModelFile, Predictions)> {
    let (cfg, seed) = predict_config(opts)?;
    let file = ModelFile::load(&opts.model)?;
    let ens = file.to_ensemble()?;
    let (rows, labels) = load_features(&opts.data)?;
    let prepared = PreparedEnsemble::new(&ens)?;
    log::info!("predicting {} rows, {:?}, {:?} finder", rows.len(), cfg.probability, cfg.finder);
    let traces = rows
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let row = i + 1;
            if x.len() != ens.d {
                return Err(CliError::Runtime(format!(
                    "row {row}: expected {} features, found {}",
                    ens.d,
                    x.len()
                )));
            }
            let x = if file.normalize { normalize_row(x, row)? } else { x.clone() };
            prepared
                .predict(&x, &cfg, sub_seed(seed, i as u64))
                .map_err(|e| CliError::Runtime(format!("row {row}: {e}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((file, Predictions { traces, labels }))
}

fn write_traces(path: &Path, file: &ModelFile, traces: &[PredictionTrace]) -> CliResult<()> {
    let records: Vec<TraceRecord> = traces
        .iter()
        .enumerate()
        .map(|(i, t)| TraceRecord {
            row: i + 1,
            label: &file.labels[t.class - 1],
            trace: t,
        })
        .collect();
    let json = serde_json::to_string_pretty(&records).map_err(|e| CliError::Runtime(e.to_string()))?;
    fs::write(path, json + "\n").map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

pub fn predict_cmd(args: &PredictArgs, out: &mut dyn Write) -> CliResult<()> {
    let (file, preds) = run_predictions(&args.opts)?;
    for t in &preds.traces {
        writeln!(out, "{}", file.labels[t.class - 1])?;
    }
    if let Some(path) = &args.opts.trace {
        write_traces(path, &file, &preds.traces)?;
    }
    Ok(())
}

pub fn evaluate_cmd(args: &EvaluateArgs, out: &mut dyn Write) -> CliResult<()> {
    let (file, preds) = run_predictions(&args.opts)?;
    let Some(raw_labels) = preds.labels else {
        return Err(CliError::Runtime(format!(
            "{} has no label column to evaluate against",
            args.opts.data.display()
        )));
    };
    let truth = raw_labels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            file.labels
                .iter()
                .position(|n| n == l)
                .map(|c| c + 1)
                .ok_or_else(|| CliError::Runtime(format!("row {}: label {l:?} unknown to the model", i + 1)))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let examples: Vec<LabeledExample> = truth.iter().map(|&c| LabeledExample::new(Vec::new(), c)).collect();
    let test = Dataset::with_classes(examples, file.k)?;
    let ledger = preds.traces.iter().map(|t| t.ledger).sum();
    let eval = score(file.k, &test, preds.traces.iter().map(|t| t.class).collect(), ledger);

    let correct: usize = (0..file.k).map(|i| eval.confusion[i][i]).sum();
    writeln!(out, "accuracy {:.6} ({correct}/{})", eval.accuracy, test.len())?;
    writeln!(out, "confusion matrix (rows: true, columns: predicted)")?;
    out.write_all(confusion_text(&file.labels, &eval.confusion).as_bytes())?;
    writeln!(out, "ledger: {}", ledger_line(&eval.ledger))?;
    if let Some(path) = &args.confusion_csv {
        fs::write(path, confusion_csv(&file.labels, &eval.confusion))
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    }
    if let Some(path) = &args.opts.trace {
        write_traces(path, &file, &preds.traces)?;
    }
    Ok(())
}

fn confusion_text(labels: &[String], m: &[Vec<usize>]) -> String {
    let width = labels
        .iter()
        .map(|l| l.len())
        .chain(m.iter().flatten().map(|c| c.to_string().len()))
        .max()
        .unwrap_or(1);
    let mut s = format!("{:>width$}", "");
    for l in labels {
        let _ = write!(s, " {l:>width$}");
    }
    s.push('\n');
    for (l, row) in labels.iter().zip(m) {
        let _ = write!(s, "{l:>width$}");
        for c in row {
            let _ = write!(s, " {c:>width$}");
        }
        s.push('\n');
    }
    s
}

fn confusion_csv(labels: &[String], m: &[Vec<usize>]) -> String {
    let mut s = String::from("true\\predicted");
    for l in labels {
        let _ = write!(s, ",{l}");
    }
    s.push('\n');
    for (l, row) in labels.iter().zip(m) {
        s.push_str(l);
        for c in row {
            let _ = write!(s, ",{c}");
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confusion_layouts() {
        let labels = vec!["a".to_string(), "bb".to_string()];
        let m = vec![vec![3, 0], vec![1, 12]];
        assert_eq!(confusion_text(&labels, &m), "    a bb\n a  3  0\nbb  1 12\n");
        assert_eq!(confusion_csv(&labels, &m), "true\\predicted,a,bb\na,3,0\nbb,1,12\n");
    }
}
