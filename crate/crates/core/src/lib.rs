//! Simulated quantum all-pair multiclass least-squares SVM.

pub mod dataset;
pub mod error;
pub mod ledger;
pub mod lssvm;
pub mod multiclass;
pub mod qclassify;
pub mod qtrain;
pub mod selection;
pub mod statevector;
pub mod stats;

pub use error::{Error, Result};
pub use ledger::ResourceLedger;

/// Derives an independent sub-seed for stream `index` of a run seeded with
/// `seed` (splitmix64 finalizer over the pair).
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
