//! Shared fixtures for the benchmarks.

use umw_core::generators;
use umw_core::{build_conflict_graph, ConflictGraph, InterferenceModel, NetworkGraph};

/// The 3x3 corner-sourced grid under primary interference.
pub fn grid3() -> (NetworkGraph, ConflictGraph) {
    let g = generators::grid(3, 3, 0, 1);
    let cg = build_conflict_graph(&g, &InterferenceModel::PrimaryInterference);
    (g, cg)
}

/// Square grid of side `k` with a corner source.
pub fn square(k: usize) -> (NetworkGraph, ConflictGraph) {
    let g = generators::grid(k, k, 0, 1);
    let cg = build_conflict_graph(&g, &InterferenceModel::PrimaryInterference);
    (g, cg)
}
