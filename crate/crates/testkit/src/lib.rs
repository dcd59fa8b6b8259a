//! Generators and reference oracles for the meros test suites. The oracles
//! are written independently of the library code they check.

pub mod dot;
pub mod models;
pub mod snapshots;

use rand::SeedableRng;

/// Deterministic generator for reproducible test runs.
pub fn rng(seed: u64) -> rand::rngs::StdRng {
    rand::rngs::StdRng::seed_from_u64(seed)
}
