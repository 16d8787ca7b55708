//! Fixed workloads shared by the benchmarks.

use mobo_core::io::generate_mscp;
use mobo_core::model::Instance;
use mobo_core::ratio::Ratio;
use mobo_core::{RatioSchedule, SolveOptions};

/// Set covering instance small enough to solve exactly in milliseconds.
pub fn small_mscp(seed: u64) -> Instance {
    generate_mscp(16, 8, 2, seed).expect("valid generator parameters")
}

/// Three-objective instance for approximation runs.
pub fn medium_mscp(seed: u64) -> Instance {
    generate_mscp(30, 12, 3, seed).expect("valid generator parameters")
}

pub fn single(ratio: u64) -> SolveOptions {
    SolveOptions::with_schedule(RatioSchedule::single(Ratio::from_integer(ratio)))
}
