//! The four classical FVS reduction rules, applied to a fixed point.
//!
//! 1. A vertex with a self-loop is forced into the solution: remove it, `k -= 1`.
//! 2. A vertex of degree at most one is removed.
//! 3. A vertex of degree two is removed and its neighbours are joined by a new
//!    edge (a self-loop when both edges lead to the same neighbour).
//! 4. More than two parallel edges are cut back to a double edge.
//!
//! Rules are driven by a worklist of dirty vertices plus a pair-multiplicity
//! table, so every edge is created, inspected and removed O(1) times.

use std::collections::{HashMap, VecDeque};

use crate::multigraph::{EdgeId, MultiGraph, VertexId};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionLog {
    /// Vertices taken into the solution, in removal order.
    pub forced: Vec<VertexId>,
    /// Always `forced.len()`.
    pub k_decrements: usize,
    /// Degree-two vertices that were bypassed, with the edge that replaced them.
    pub smoothed: Vec<(VertexId, EdgeId)>,
    /// Incidence-list entries inspected; bounded by a constant times the input size.
    pub work: usize,
}

impl ReductionLog {
    pub(crate) fn force(&mut self, v: VertexId) {
        debug_assert!(!self.forced.contains(&v));
        self.forced.push(v);
        self.k_decrements += 1;
    }

    pub fn extend(&mut self, other: ReductionLog) {
        self.forced.extend(other.forced);
        self.k_decrements += other.k_decrements;
        self.smoothed.extend(other.smoothed);
        self.work += other.work;
    }
}

/// Applies the basic reductions to a copy of `g`. Returns the reduced graph,
/// `k - |forced|` (possibly negative) and the log.
pub fn apply_basic_reductions(g: &MultiGraph, k: i64) -> (MultiGraph, i64, ReductionLog) {
    let mut out = g.clone();
    let mut log = ReductionLog::default();
    reduce_in_place(&mut out, &mut log);
    let k_prime = k - log.k_decrements as i64;
    (out, k_prime, log)
}

/// In-place variant; forced vertices and smoothing steps are appended to `log`.
pub fn reduce_in_place(g: &mut MultiGraph, log: &mut ReductionLog) {
    Reducer::new(g, log).run();
}

fn pair_key(a: VertexId, b: VertexId) -> (u32, u32) {
    if a.0 <= b.0 {
        (a.0, b.0)
    } else {
        (b.0, a.0)
    }
}

struct Reducer<'a> {
    g: &'a mut MultiGraph,
    log: &'a mut ReductionLog,
    loops: Vec<u32>,
    pairs: HashMap<(u32, u32), u32>,
    queued: Vec<bool>,
    queue: VecDeque<VertexId>,
}

impl<'a> Reducer<'a> {
    fn new(g: &'a mut MultiGraph, log: &'a mut ReductionLog) -> Self {
        let bound = g.vertex_bound();
        Reducer {
            g,
            log,
            loops: vec![0; bound],
            pairs: HashMap::new(),
            queued: vec![false; bound],
            queue: VecDeque::new(),
        }
    }

    fn enqueue(&mut self, v: VertexId) {
        if !self.queued[v.index()] {
            self.queued[v.index()] = true;
            self.queue.push_back(v);
        }
    }

    fn run(mut self) {
        // Census: loops, pair multiplicities, and rule 4 on the input.
        let edges: Vec<_> = self.g.edges().collect();
        for (e, a, b) in edges {
            self.log.work += 1;
            if a == b {
                self.loops[a.index()] += 1;
                continue;
            }
            let count = self.pairs.entry(pair_key(a, b)).or_insert(0);
            *count += 1;
            if *count > 2 {
                *count -= 1;
                self.g.remove_edge(e).expect("live edge");
            }
        }
        let all: Vec<_> = self.g.vertices().collect();
        for v in all {
            self.enqueue(v);
        }

        while let Some(v) = self.queue.pop_front() {
            self.queued[v.index()] = false;
            if !self.g.contains_vertex(v) {
                continue;
            }
            if self.loops[v.index()] > 0 {
                self.delete_vertex(v);
                self.log.force(v);
                continue;
            }
            match self.g.loop_free_degree(v) {
                0 | 1 => self.delete_vertex(v),
                2 => self.bypass(v),
                _ => {}
            }
        }
    }

    /// Removes `v`, keeping the pair table in sync and dirtying its neighbours.
    fn delete_vertex(&mut self, v: VertexId) {
        let incident: Vec<EdgeId> = self.g.incident(v).to_vec();
        for e in incident {
            self.log.work += 1;
            let w = self.g.opposite(e, v);
            if w != v {
                self.release_pair(v, w);
                self.enqueue(w);
            }
        }
        self.g.remove_vertex(v).expect("live vertex");
        self.loops[v.index()] = 0;
    }

    fn release_pair(&mut self, a: VertexId, b: VertexId) {
        let key = pair_key(a, b);
        if let Some(c) = self.pairs.get_mut(&key) {
            *c -= 1;
            if *c == 0 {
                self.pairs.remove(&key);
            }
        }
    }

    fn bypass(&mut self, v: VertexId) {
        let inc = self.g.incident(v);
        let (e1, e2) = (inc[0], inc[1]);
        self.log.work += 2;
        let a = self.g.opposite(e1, v);
        let b = self.g.opposite(e2, v);
        self.delete_vertex(v);
        let e = self.g.add_edge(a, b).expect("neighbours are live");
        self.log.smoothed.push((v, e));
        if a == b {
            self.loops[a.index()] += 1;
            self.enqueue(a);
            return;
        }
        let count = self.pairs.entry(pair_key(a, b)).or_insert(0);
        *count += 1;
        if *count > 2 {
            *count -= 1;
            self.g.remove_edge(e).expect("just added");
        }
        self.enqueue(a);
        self.enqueue(b);
    }
}

/// Postconditions of a fixed point: no loops, minimum degree three,
/// multiplicities at most two.
pub fn check_reduced(g: &MultiGraph) -> Result<(), String> {
    let mut pairs: HashMap<(u32, u32), u32> = HashMap::new();
    for (e, a, b) in g.edges() {
        if a == b {
            return Err(format!("self-loop {e} on {a}"));
        }
        let c = pairs.entry(pair_key(a, b)).or_insert(0);
        *c += 1;
        if *c > 2 {
            return Err(format!("multiplicity > 2 between {a} and {b}"));
        }
    }
    for v in g.vertices() {
        if g.degree(v) < 3 {
            return Err(format!("{v} has degree {}", g.degree(v)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_fvs;
    use proptest::prelude::*;

    fn cycle(n: u32) -> MultiGraph {
        let mut g = MultiGraph::with_vertices(n as usize);
        for i in 0..n {
            g.add_edge(VertexId(i), VertexId((i + 1) % n)).unwrap();
        }
        g
    }

    #[test]
    fn four_cycle_collapses_to_forced_vertex() {
        let g = cycle(4);
        assert_eq!(brute_fvs(&g).unwrap().size, 1);
        let (out, k, log) = apply_basic_reductions(&g, 1);
        assert_eq!(out.vertex_count(), 0);
        assert_eq!(k, 0);
        assert_eq!(log.forced.len(), 1);
        assert_eq!(log.k_decrements, 1);
        // input untouched
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn tree_dissolves() {
        let mut g = MultiGraph::with_vertices(7);
        for i in 1..7u32 {
            g.add_edge(VertexId((i - 1) / 2), VertexId(i)).unwrap();
        }
        let (out, k, log) = apply_basic_reductions(&g, 5);
        assert_eq!(out.vertex_count(), 0);
        assert_eq!(k, 5);
        assert!(log.forced.is_empty());
    }

    #[test]
    fn triple_edge_with_pendant() {
        let mut g = MultiGraph::with_vertices(3);
        let (u, v, p) = (VertexId(0), VertexId(1), VertexId(2));
        for _ in 0..3 {
            g.add_edge(u, v).unwrap();
        }
        g.add_edge(u, p).unwrap();
        assert_eq!(brute_fvs(&g).unwrap().size, 1);
        let (out, k, log) = apply_basic_reductions(&g, 2);
        assert_eq!(out.vertex_count(), 0);
        assert_eq!(k, 1);
        assert_eq!(log.forced.len(), 1);
    }

    #[test]
    fn empty_graph_is_fixed_point() {
        let g = MultiGraph::new();
        let (out, k, log) = apply_basic_reductions(&g, 0);
        assert_eq!(out.vertex_count(), 0);
        assert_eq!(k, 0);
        assert_eq!(log, ReductionLog::default());
    }

    #[test]
    fn k4_is_already_reduced() {
        let mut g = MultiGraph::with_vertices(4);
        for a in 0..4u32 {
            for b in a + 1..4 {
                g.add_edge(VertexId(a), VertexId(b)).unwrap();
            }
        }
        let (out, k, log) = apply_basic_reductions(&g, 3);
        assert_eq!(out.edge_count(), 6);
        assert_eq!(k, 3);
        assert!(log.smoothed.is_empty());
    }

    #[test]
    fn negative_parameter_is_allowed() {
        let mut g = MultiGraph::with_vertices(2);
        g.add_edge(VertexId(0), VertexId(0)).unwrap();
        g.add_edge(VertexId(1), VertexId(1)).unwrap();
        let (_, k, log) = apply_basic_reductions(&g, 0);
        assert_eq!(k, -2);
        assert_eq!(log.forced.len(), 2);
    }

    fn arb_multigraph(max_n: u32, max_m: usize) -> impl Strategy<Value = MultiGraph> {
        (1..=max_n).prop_flat_map(move |n| {
            proptest::collection::vec((0..n, 0..n), 0..=max_m).prop_map(move |pairs| {
                let mut g = MultiGraph::with_vertices(n as usize);
                for (a, b) in pairs {
                    g.add_edge(VertexId(a), VertexId(b)).unwrap();
                }
                g
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn postconditions_and_idempotence(g in arb_multigraph(14, 40)) {
            let (out, k, log) = apply_basic_reductions(&g, 10);
            prop_assert!(check_reduced(&out).is_ok(), "{:?}", check_reduced(&out));
            prop_assert!(out.check_consistency().is_ok());
            prop_assert_eq!(k, 10 - log.forced.len() as i64);
            let mut forced = log.forced.clone();
            forced.sort_unstable();
            forced.dedup();
            prop_assert_eq!(forced.len(), log.forced.len());

            let (again, k2, log2) = apply_basic_reductions(&out, k);
            prop_assert_eq!(k2, k);
            prop_assert!(log2.forced.is_empty() && log2.smoothed.is_empty());
            prop_assert_eq!(again.edge_count(), out.edge_count());
            prop_assert_eq!(again.vertex_count(), out.vertex_count());
        }

        #[test]
        fn preserves_fvs(g in arb_multigraph(10, 24)) {
            let (out, _, log) = apply_basic_reductions(&g, 0);
            let before = brute_fvs(&g).unwrap().size;
            let after = brute_fvs(&out).unwrap().size;
            prop_assert_eq!(before, after + log.forced.len());
        }

        #[test]
        fn linear_work(g in arb_multigraph(60, 200)) {
            let (_, _, log) = apply_basic_reductions(&g, 0);
            prop_assert!(log.work <= 3 * g.edge_count() + 4 * g.vertex_count() + 1,
                "work {} for m={}", log.work, g.edge_count());
        }
    }
}
