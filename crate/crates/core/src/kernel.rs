//! The s-cycle cover reduction and the kernelization driver.
//!
//! [`kernelize`] alternates the basic reductions with cover computations at a
//! high-degree vertex `s`. A cover larger than `k` forces `s` into every small
//! solution; otherwise the cover's value-1 vertices are tied to `s` by double
//! edges and the bridges from `s` into tree components are dropped, which
//! brings `d(s)` down to at most `2k`. Two double-edge rules keep the number
//! of rounds at O(k³). The result has at most `2k² + k` vertices and `4k²`
//! edges, or the instance is rejected.

use std::collections::HashMap;

use thiserror::Error;

use crate::cyclecover::{min_cycle_cover, CoverError, CoverOutcome, CycleCover};
use crate::multigraph::{MultiGraph, VertexId};
use crate::reductions::{self, ReductionLog};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("parameter must be non-negative, got {0}")]
    NegativeParameter(i64),
    #[error("cover belongs to source {cover}, reduction asked for {requested}")]
    SourceMismatch {
        cover: VertexId,
        requested: VertexId,
    },
    #[error("cover does not match the graph's vertex range")]
    ShapeMismatch,
    #[error("graph has a self-loop at {0}")]
    SelfLoop(VertexId),
    #[error("degree of {s} is {degree} after reduction, above 2x(V) = {bound}")]
    DegreeBound {
        s: VertexId,
        degree: usize,
        bound: usize,
    },
    #[error("cover at {0} is below half its degree but has no value-1 vertex")]
    NoForcedVertex(VertexId),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// Applies the s-cycle cover reduction to a copy of `g`.
pub fn cycle_cover_reduction(
    g: &MultiGraph,
    s: VertexId,
    x: &CycleCover,
) -> Result<MultiGraph, KernelError> {
    let mut out = g.clone();
    reduce_with_cover(&mut out, s, x)?;
    Ok(out)
}

/// In-place s-cycle cover reduction. Checks `d(s) ≤ 2x(V)` afterwards.
pub fn reduce_with_cover(
    g: &mut MultiGraph,
    s: VertexId,
    x: &CycleCover,
) -> Result<(), KernelError> {
    if x.source() != s {
        return Err(KernelError::SourceMismatch {
            cover: x.source(),
            requested: s,
        });
    }
    if x.vertex_bound() != g.vertex_bound() || !g.contains_vertex(s) {
        return Err(KernelError::ShapeMismatch);
    }
    if let Some((_, a, _)) = g.edges().find(|&(_, a, b)| a == b) {
        return Err(KernelError::SelfLoop(a));
    }
    let forced = x.ones();

    // Edges from s into tree components of G − X − s that attach by a single edge.
    let mut avoid = forced.clone();
    avoid.push(s);
    let components = g.components_avoiding(&avoid);
    let mut owner = vec![usize::MAX; g.vertex_bound()];
    for (i, c) in components.iter().enumerate() {
        for &v in &c.vertices {
            owner[v.index()] = i;
        }
    }
    let mut attach: Vec<Vec<_>> = vec![Vec::new(); components.len()];
    for &e in g.incident(s) {
        let w = g.opposite(e, s);
        if let Some(list) = attach.get_mut(owner[w.index()]) {
            list.push(e);
        }
    }
    let bridges: Vec<_> = components
        .iter()
        .zip(&attach)
        .filter(|(c, a)| c.tree && a.len() == 1)
        .map(|(_, a)| a[0])
        .collect();
    for e in bridges {
        g.remove_edge(e).expect("live edge");
    }

    for &v in &forced {
        let mut between = g.edges_between(s, v);
        while between.len() > 2 {
            g.remove_edge(between.pop().expect("nonempty"))
                .expect("live edge");
        }
        for _ in between.len()..2 {
            g.add_edge(s, v).expect("live endpoints");
        }
    }

    let degree = g.degree(s);
    if degree > x.size_doubled() {
        return Err(KernelError::DegreeBound {
            s,
            degree,
            bound: x.size_doubled(),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KernelStats {
    /// Passes through the main loop, including the final one.
    pub iterations: u64,
    pub covers_computed: u64,
    /// Sources removed because their cover exceeded the budget.
    pub s_removals: u64,
    /// Vertices removed for carrying more than `k` double edges.
    pub heavy_removals: u64,
    /// s-cycle cover reductions performed.
    pub reductions_applied: u64,
    /// Augmentations summed over all cover computations.
    pub augmentations: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Reduced { graph: MultiGraph, k_prime: i64 },
    TriviallyNo,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelOutcome {
    pub verdict: Verdict,
    /// Every vertex taken into the solution (rule 1, budget overflow, heavy
    /// double-edge vertices), with original ids.
    pub log: ReductionLog,
    pub stats: KernelStats,
}

/// `2k³ + 4k² + 3k + 2`: the initial potential of the round-counting argument
/// plus the terminal pass.
pub fn iteration_bound(k: i64) -> u64 {
    let k = k.max(0) as u64;
    2 * k * k * k + 4 * k * k + 3 * k + 2
}

/// Size limits `(2k² + k, 4k²)` on vertices and edges of a reduced instance.
pub fn size_bounds(k: i64) -> (usize, usize) {
    let k = k.max(0) as usize;
    (2 * k * k + k, 4 * k * k)
}

/// Reduces `(g, k)` to an equivalent instance with at most `2k² + k` vertices
/// and `4k²` edges, or decides that `g` has no feedback vertex set of size `k`.
pub fn kernelize(g: &MultiGraph, k: i64) -> Result<KernelOutcome, KernelError> {
    if k < 0 {
        return Err(KernelError::NegativeParameter(k));
    }
    let mut g = g.clone();
    let mut k = k;
    let mut log = ReductionLog::default();
    let mut stats = KernelStats::default();

    let verdict = loop {
        stats.iterations += 1;
        let before = log.k_decrements;
        reductions::reduce_in_place(&mut g, &mut log);
        k -= (log.k_decrements - before) as i64;
        debug_assert_eq!(reductions::check_reduced(&g), Ok(()));

        if k < 0 {
            break Verdict::TriviallyNo;
        }
        let (max_n, max_m) = size_bounds(k);
        if g.vertex_count() <= max_n && g.edge_count() <= max_m {
            break Verdict::Reduced {
                graph: g,
                k_prime: k,
            };
        }
        let budget = 2 * k as usize;
        if g.max_degree() <= budget {
            break Verdict::TriviallyNo;
        }

        let census = DoubleEdgeCensus::new(&g);
        if let Some(v) = census.heavy_vertex(k as usize) {
            g.remove_vertex(v).expect("live vertex");
            log.force(v);
            k -= 1;
            stats.heavy_removals += 1;
            continue;
        }
        if census.pairs > (k * k) as usize {
            break Verdict::TriviallyNo;
        }

        let s = g
            .vertices()
            .find(|&v| g.loop_free_degree(v) > budget)
            .expect("some vertex exceeds the degree budget");
        stats.covers_computed += 1;
        match min_cycle_cover(&g, s, budget)? {
            CoverOutcome::ExceedsBudget { augmentations, .. } => {
                stats.augmentations += augmentations as u64;
                g.remove_vertex(s).expect("live vertex");
                log.force(s);
                k -= 1;
                stats.s_removals += 1;
            }
            CoverOutcome::Cover {
                cover,
                augmentations,
                ..
            } => {
                stats.augmentations += augmentations as u64;
                // Minimum degree is at least three here and 2x(V) ≤ 2k < d(s).
                if cover.ones().is_empty() {
                    return Err(KernelError::NoForcedVertex(s));
                }
                reduce_with_cover(&mut g, s, &cover)?;
                stats.reductions_applied += 1;
                debug_assert!(g.degree(s) <= budget);
            }
        }
    };

    Ok(KernelOutcome {
        verdict,
        log,
        stats,
    })
}

/// Pairs of vertices joined by exactly two parallel edges.
struct DoubleEdgeCensus {
    pairs: usize,
    per_vertex: Vec<(VertexId, usize)>,
}

impl DoubleEdgeCensus {
    fn new(g: &MultiGraph) -> Self {
        let mut counts: HashMap<(VertexId, VertexId), u32> = HashMap::new();
        for (_, a, b) in g.edges() {
            *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
        let mut incident = vec![0usize; g.vertex_bound()];
        let mut pairs = 0;
        for (&(a, b), &c) in &counts {
            if c == 2 {
                pairs += 1;
                incident[a.index()] += 1;
                incident[b.index()] += 1;
            }
        }
        let per_vertex = g.vertices().map(|v| (v, incident[v.index()])).collect();
        DoubleEdgeCensus { pairs, per_vertex }
    }

    /// Lowest-id vertex incident to more than `k` double edges.
    fn heavy_vertex(&self, k: usize) -> Option<VertexId> {
        self.per_vertex
            .iter()
            .find(|&&(_, c)| c > k)
            .map(|&(v, _)| v)
    }
}
