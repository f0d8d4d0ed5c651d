use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qallpair", version, about = "Simulated quantum all-pair multiclass LS-SVM")]
pub struct Cli {
    /// Raise log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train an ensemble from a labeled CSV and write a model file.
    Train(TrainArgs),
    /// Print one predicted label per input row.
    Predict(PredictArgs),
    /// Report accuracy and the confusion matrix on a labeled CSV.
    Evaluate(EvaluateArgs),
    /// Run one quantum subroutine on its own and print the outcome.
    Demo(DemoArgs),
    /// Max-finding query scaling over a range of class counts.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    AllPair,
    OneVsAll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TrainingModeArg {
    Classical,
    Quantum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Linear,
    Rbf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbabilityArg {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FinderArg {
    Quantum,
    Classical,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Training CSV: feature columns plus a `label` column (or last column).
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value = "all-pair")]
    pub strategy: StrategyArg,
    #[arg(long, value_enum, default_value = "classical")]
    pub mode: TrainingModeArg,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, value_enum, default_value = "linear")]
    pub kernel: KernelArg,
    /// RBF width.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Scale every feature row to unit length (applied again at prediction).
    #[arg(long)]
    pub normalize: bool,
    #[arg(long, default_value_t = 8)]
    pub precision_qubits: usize,
    #[arg(long, default_value_t = 0.0625)]
    pub eps_kr: f64,
    /// Evolution time for phase estimation [default: π].
    #[arg(long)]
    pub t0: Option<f64>,
    #[arg(long, env = "QALLPAIR_SEED")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictOptions {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    pub probability: ProbabilityArg,
    /// Shots per pair in sampled mode.
    #[arg(long, conflicts_with = "eps")]
    pub shots: Option<u64>,
    /// Target accuracy of each sampled probability; sets the shot count.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, value_enum, default_value = "classical")]
    pub mode_finder: FinderArg,
    /// Additive accuracy of the quantum mode finder.
    #[arg(long, default_value_t = 0.1)]
    pub mode_eps: f64,
    /// Failure probability of the quantum mode finder.
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Scales the Dürr-Høyer iteration budget (one-vs-all).
    #[arg(long, default_value_t = 1.0)]
    pub budget_multiplier: f64,
    #[arg(long, env = "QALLPAIR_SEED")]
    pub seed: Option<u64>,
    /// Write every prediction trace to this JSON file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub opts: PredictOptions,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub opts: PredictOptions,
    /// Also write the confusion matrix as CSV.
    #[arg(long)]
    pub confusion_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[command(subcommand)]
    pub demo: Demo,
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// Dürr-Høyer maximum finding over random scores.
    GroverMax {
        #[arg(long, default_value_t = 16)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1.0)]
        budget_multiplier: f64,
        #[arg(long, env = "QALLPAIR_SEED")]
        seed: Option<u64>,
    },
    /// Quantum mode finding over a vote list.
    ModeFind {
        /// Comma-separated class ids.
        #[arg(long, value_delimiter = ',', required = true)]
        votes: Vec<usize>,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        precision_qubits: Option<usize>,
        #[arg(long, env = "QALLPAIR_SEED")]
        seed: Option<u64>,
    },
    /// Interference test between two amplitude-encoded vectors.
    SwapTest {
        #[arg(long, value_delimiter = ',', default_value = "0.6,0.8")]
        u: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.8,-0.6")]
        x: Vec<f64>,
        /// Use `u` for both states.
        #[arg(long)]
        identical: bool,
        /// Also estimate P from this many shots.
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, env = "QALLPAIR_SEED")]
        seed: Option<u64>,
    },
    /// Phase-estimation solve of the two-point LS-SVM system.
    QpeSolve {
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 8)]
        precision_qubits: usize,
        #[arg(long, default_value_t = 0.0625)]
        eps_kr: f64,
        /// Use a Lie-Trotter product with this many steps instead of the exact exponential.
        #[arg(long)]
        trotter_steps: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Class counts: a comma list (`4,8,16`) or a doubling range (`4..64`).
    #[arg(long, default_value = "4..64")]
    pub k: String,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[arg(long, default_value_t = 1.0)]
    pub budget_multiplier: f64,
    #[arg(long, env = "QALLPAIR_SEED")]
    pub seed: Option<u64>,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
