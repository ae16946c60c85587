//! Benchmarks for the core algorithms; see `benches/algorithms.rs`.
//!
//! Fixed inputs shared by the benches live here so they stay comparable
//! between runs.

use coxforge::graph::{build_singularity, Family, ResolutionGraph};
use coxforge::ring::MultiDegree;

/// A deterministic spread of degrees in `[-3, 3]^n`.
pub fn degree_sample(g: &ResolutionGraph, count: usize) -> Vec<MultiDegree> {
    let n = g.len();
    (0..count)
        .map(|c| MultiDegree((0..n).map(|i| ((c * 7 + i * 3 + c * i) % 7) as i64 - 3).collect()))
        .collect()
}

pub fn graph(f: Family, n: usize) -> ResolutionGraph {
    build_singularity(f, n).expect("valid benchmark case")
}
