//! Shared workloads for the benchmarks.

use fvs_kernel::generate::planted_fvs;
use fvs_kernel::{MultiGraph, VertexId};

/// Planted instance with `m` edges and `k` planted vertices, self-loops
/// dropped, plus the lowest-id vertex whose degree exceeds `2k`.
pub fn planted_workload(m: usize, k: usize, seed: u64) -> (MultiGraph, VertexId) {
    let n = (m / 3).max(k + 2);
    let raw = planted_fvs(n, k, m, seed);
    let mut g = MultiGraph::with_vertices(n);
    for (_, a, b) in raw.edges().filter(|&(_, a, b)| a != b) {
        g.add_edge(a, b).expect("in range");
    }
    let s = g
        .vertices()
        .find(|&v| g.degree(v) > 2 * k)
        .unwrap_or(VertexId(0));
    (g, s)
}
