//! File formats, the family runner and the verification suites on top of
//! [`hypgraph_core`].

pub mod config;
pub mod report;
pub mod suites;
pub mod table;

pub use hypgraph_core as core;

use hypgraph_core::family::{class_constants, evaluate_member, FamilySpec, StabilityReport};
use rayon::prelude::*;

/// Runs every member concurrently; rows stay in spec order.
pub fn run_family(spec: &FamilySpec) -> hypgraph_core::Result<StabilityReport> {
    let constants = class_constants(spec)?;
    let rows = spec
        .masses
        .par_iter()
        .map(|&m| evaluate_member(spec, &constants, m))
        .collect();
    Ok(StabilityReport {
        spec: spec.clone(),
        constants,
        rows,
    })
}
