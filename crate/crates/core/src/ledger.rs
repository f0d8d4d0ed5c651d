use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

/// Per-run resource accounting. Counters only ever increase within a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceLedger {
    pub grover_iterations: u64,
    pub oracle_queries: u64,
    pub measurement_shots: u64,
    pub qpe_qubits_used: u64,
}

impl ResourceLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record_grover(&mut self, iterations: u64) {
        self.grover_iterations += iterations;
        self.oracle_queries += iterations;
    }

    pub fn record_oracle(&mut self, queries: u64) {
        self.oracle_queries += queries;
    }

    pub fn record_shots(&mut self, shots: u64) {
        self.measurement_shots += shots;
    }

    pub fn record_qpe(&mut self, qubits: u64) {
        self.qpe_qubits_used += qubits;
    }
}

impl AddAssign for ResourceLedger {
    fn add_assign(&mut self, rhs: Self) {
        self.grover_iterations += rhs.grover_iterations;
        self.oracle_queries += rhs.oracle_queries;
        self.measurement_shots += rhs.measurement_shots;
        self.qpe_qubits_used += rhs.qpe_qubits_used;
    }
}

impl std::iter::Sum for ResourceLedger {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), |mut acc, l| {
            acc += l;
            acc
        })
    }
}
