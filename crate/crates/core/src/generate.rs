//! Deterministic instance generators. The same parameters and seed always
//! produce the same graph, edge order included.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::multigraph::{MultiGraph, VertexId};

/// Random forest on vertices `k..n` plus `k` planted vertices `0..k` carrying
/// every remaining edge, so `{0, .., k-1}` meets all cycles. The forest is a
/// random recursive tree with each attachment dropped with probability 1/8.
/// Extra edges go from a uniformly chosen planted vertex to a uniformly chosen
/// vertex until the graph has `m` edges (or the forest alone already exceeds
/// `m`).
pub fn planted_fvs(n: usize, k: usize, m: usize, seed: u64) -> MultiGraph {
    assert!(k <= n, "planted set larger than the graph");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = MultiGraph::with_vertices(n);
    for i in k + 1..n {
        if rng.gen_range(0..8) != 0 {
            let parent = rng.gen_range(k..i);
            g.add_edge(VertexId(parent as u32), VertexId(i as u32))
                .expect("in range");
        }
    }
    if k == 0 {
        return g;
    }
    while g.edge_count() < m {
        let p = rng.gen_range(0..k);
        let v = rng.gen_range(0..n);
        g.add_edge(VertexId(p as u32), VertexId(v as u32))
            .expect("in range");
    }
    g
}

/// `m` edges with independent uniform endpoints; loops and parallel edges occur.
pub fn random_multigraph(n: usize, m: usize, seed: u64) -> MultiGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = MultiGraph::with_vertices(n);
    if n == 0 {
        return g;
    }
    for _ in 0..m {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        g.add_edge(VertexId(a as u32), VertexId(b as u32))
            .expect("in range");
    }
    g
}

/// `petals` cycles of length `petal_len` (at least 2) sharing only the hub 0.
pub fn flower(petals: usize, petal_len: usize) -> MultiGraph {
    assert!(petal_len >= 2, "a petal needs at least two vertices");
    let mut g = MultiGraph::with_vertices(1 + petals * (petal_len - 1));
    let hub = VertexId(0);
    for p in 0..petals {
        let first = 1 + p * (petal_len - 1);
        let mut prev = hub;
        for i in 0..petal_len - 1 {
            let v = VertexId((first + i) as u32);
            g.add_edge(prev, v).expect("in range");
            prev = v;
        }
        g.add_edge(prev, hub).expect("in range");
    }
    g
}

/// `rows × cols` grid, row-major ids.
pub fn grid(rows: usize, cols: usize) -> MultiGraph {
    let mut g = MultiGraph::with_vertices(rows * cols);
    let id = |r: usize, c: usize| VertexId((r * cols + c) as u32);
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                g.add_edge(id(r, c), id(r, c + 1)).expect("in range");
            }
            if r + 1 < rows {
                g.add_edge(id(r, c), id(r + 1, c)).expect("in range");
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_fvs, is_forest_without};

    #[test]
    fn planted_set_hits_every_cycle() {
        for seed in 0..20 {
            let g = planted_fvs(50, 3, 120, seed);
            assert_eq!(g.edge_count(), 120);
            let planted: Vec<_> = (0..3).map(VertexId).collect();
            assert!(is_forest_without(&g, &planted));
        }
        for seed in 0..20 {
            let g = planted_fvs(12, 2, 30, seed);
            assert!(brute_fvs(&g).unwrap().size <= 2);
        }
    }

    #[test]
    fn same_seed_same_graph() {
        let a = planted_fvs(40, 3, 90, 7);
        let b = planted_fvs(40, 3, 90, 7);
        assert!(a.edges().eq(b.edges()));
        let c = planted_fvs(40, 3, 90, 8);
        assert!(!a.edges().eq(c.edges()));
        let r1 = random_multigraph(10, 30, 1);
        let r2 = random_multigraph(10, 30, 1);
        assert!(r1.edges().eq(r2.edges()));
    }

    #[test]
    fn flower_shape() {
        let g = flower(5, 3);
        assert_eq!(g.vertex_count(), 11);
        assert_eq!(g.edge_count(), 15);
        assert_eq!(g.degree(VertexId(0)), 10);
        assert_eq!(brute_fvs(&g).unwrap().size, 1);
    }

    #[test]
    fn grid_shape() {
        let g = grid(3, 4);
        assert_eq!(g.vertex_count(), 12);
        assert_eq!(g.edge_count(), 3 * 3 + 2 * 4);
    }
}
