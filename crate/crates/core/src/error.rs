use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    /// A malformed input row. `row` is 1-based and counts data rows only.
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("no examples")]
    NoExamples,
    #[error("class {0} unrepresented")]
    ClassUnrepresented(usize),
    #[error("invalid label {0}: labels must be integers >= 1")]
    InvalidLabel(String),
    #[error("zero vector encountered")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singular linear system")]
    Singular,
    #[error("operator is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("qubit index collision or out of range: {0}")]
    QubitIndex(String),
    #[error("{0} qubits exceeds the simulator cap of {cap}", cap = crate::statevector::MAX_QUBITS)]
    QubitCap(usize),
    #[error("pair ({f}, {s}) has {points} training points; quantum training caps the solution register at {cap} qubits ({max} points)", max = (1usize << cap) - 1)]
    RegisterCap { f: usize, s: usize, points: usize, cap: usize },
    #[error("post-selection probability {0:e} below threshold")]
    PostSelection(f64),
    #[error("kernel unsupported in quantum path")]
    KernelUnsupported,
    #[error("degenerate model: bias and multipliers are all zero")]
    DegenerateModel,
    #[error("register layout mismatch")]
    LayoutMismatch,
    #[error("vote list: {0}")]
    Votes(String),
    #[error("empty test set")]
    EmptyTestSet,
}
