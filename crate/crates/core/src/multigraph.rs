//! Undirected multigraph with stable vertex and edge identifiers.
//!
//! Parallel edges and self-loops are first-class: every edge has its own
//! [`EdgeId`], and a self-loop appears twice in its vertex's incidence list so
//! that it contributes 2 to the degree. Removed slots are tombstoned and ids
//! are never handed out again for the lifetime of the graph; only
//! [`MultiGraph::compacted`] renumbers.

use std::fmt;

use thiserror::Error;

/// Dense vertex identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

/// Dense edge identifier. Parallel edges get distinct ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
}

/// An edge slot: both endpoints plus the position of the edge inside each
/// endpoint's incidence list, so removal is O(1).
#[derive(Clone, Debug, PartialEq, Eq)]
struct EdgeSlot {
    ends: [VertexId; 2],
    pos: [u32; 2],
}

/// Equality is structural: ids, tombstones and incidence order all count.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiGraph {
    alive: Vec<bool>,
    adjacency: Vec<Vec<EdgeId>>,
    edges: Vec<Option<EdgeSlot>>,
    vertex_count: usize,
    edge_count: usize,
}

/// A connected component returned by [`MultiGraph::components_avoiding`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Vertices in ascending id order.
    pub vertices: Vec<VertexId>,
    /// Edges with both endpoints inside the component, counted with multiplicity.
    pub edge_count: usize,
    /// `edge_count == vertices.len() - 1`, i.e. no cycle, no parallel pair, no loop.
    pub tree: bool,
}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with `n` isolated vertices `0..n`.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for _ in 0..n {
            g.add_vertex();
        }
        g
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let id = VertexId(self.alive.len() as u32);
        self.alive.push(true);
        self.adjacency.push(Vec::new());
        self.vertex_count += 1;
        id
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let id = EdgeId(self.edges.len() as u32);
        let pu = self.adjacency[u.index()].len() as u32;
        self.adjacency[u.index()].push(id);
        let pv = self.adjacency[v.index()].len() as u32;
        self.adjacency[v.index()].push(id);
        self.edges.push(Some(EdgeSlot {
            ends: [u, v],
            pos: [pu, pv],
        }));
        self.edge_count += 1;
        Ok(id)
    }

    /// Removes `e` and returns its endpoints.
    pub fn remove_edge(&mut self, e: EdgeId) -> Result<(VertexId, VertexId), GraphError> {
        let slot = self
            .edges
            .get_mut(e.index())
            .and_then(Option::take)
            .ok_or(GraphError::UnknownEdge(e))?;
        // Detach the higher position first so a self-loop's second slot stays valid.
        let mut sides = [(slot.ends[0], slot.pos[0]), (slot.ends[1], slot.pos[1])];
        sides.sort_by_key(|side| std::cmp::Reverse(side.1));
        for (w, p) in sides {
            self.detach(w, p);
        }
        self.edge_count -= 1;
        Ok((slot.ends[0], slot.ends[1]))
    }

    fn detach(&mut self, w: VertexId, p: u32) {
        let list = &mut self.adjacency[w.index()];
        let last = list.len() as u32 - 1;
        list.swap_remove(p as usize);
        if p != last {
            let moved = list[p as usize];
            let slot = self.edges[moved.index()]
                .as_mut()
                .expect("incidence list references a live edge");
            for side in 0..2 {
                if slot.ends[side] == w && slot.pos[side] == last {
                    slot.pos[side] = p;
                    break;
                }
            }
        }
    }

    /// Removes `v` together with every incident edge; returns the removed edges.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<Vec<EdgeId>, GraphError> {
        self.check_vertex(v)?;
        let mut removed = Vec::with_capacity(self.adjacency[v.index()].len());
        while let Some(&e) = self.adjacency[v.index()].last() {
            self.remove_edge(e)?;
            removed.push(e);
        }
        self.alive[v.index()] = false;
        self.vertex_count -= 1;
        Ok(removed)
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    #[inline]
    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.alive.get(v.index()).copied().unwrap_or(false)
    }

    #[inline]
    pub fn contains_edge(&self, e: EdgeId) -> bool {
        matches!(self.edges.get(e.index()), Some(Some(_)))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// One past the largest vertex id ever issued.
    pub fn vertex_bound(&self) -> usize {
        self.alive.len()
    }

    /// One past the largest edge id ever issued.
    pub fn edge_bound(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges
            .get(e.index())
            .and_then(Option::as_ref)
            .map(|s| (s.ends[0], s.ends[1]))
    }

    /// The endpoint of `e` that is not `v` (or `v` itself for a loop).
    ///
    /// Panics if `e` is not live.
    #[inline]
    pub fn opposite(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.endpoints(e).expect("live edge");
        if a == v {
            b
        } else {
            a
        }
    }

    /// Incident edges of `v`; a self-loop is listed twice. Empty for removed vertices.
    #[inline]
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        self.adjacency.get(v.index()).map_or(&[], Vec::as_slice)
    }

    /// `|δ(v)|` counting multiplicity; a self-loop contributes 2.
    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v).len()
    }

    /// Degree for decision making. Vertices carrying a self-loop have no
    /// meaningful degree for the reduction rules.
    #[inline]
    pub fn loop_free_degree(&self, v: VertexId) -> usize {
        debug_assert!(
            !self.has_self_loop(v),
            "degree of {v} queried while it carries a self-loop"
        );
        self.degree(v)
    }

    pub fn has_self_loop(&self, v: VertexId) -> bool {
        self.incident(v).iter().any(|&e| self.opposite(e, v) == v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| VertexId(i as u32))
    }

    /// Live edges in ascending id order with their endpoints.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.as_ref().map(|s| (EdgeId(i as u32), s.ends[0], s.ends[1])))
    }

    /// Number of parallel edges between `u` and `v`; for `u == v` the number of loops.
    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        let hits = self
            .incident(a)
            .iter()
            .filter(|&&e| self.opposite(e, a) == b)
            .count();
        if u == v {
            hits / 2
        } else {
            hits
        }
    }

    /// Edges between `u` and `v` (each loop once when `u == v`), ascending.
    pub fn edges_between(&self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self
            .incident(u)
            .iter()
            .copied()
            .filter(|&e| self.opposite(e, u) == v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Connected components of the subgraph induced on `V \ avoid`.
    pub fn components_avoiding(&self, avoid: &[VertexId]) -> Vec<Component> {
        let bound = self.vertex_bound();
        let mut blocked = vec![false; bound];
        for &v in avoid {
            if v.index() < bound {
                blocked[v.index()] = true;
            }
        }
        let mut seen = vec![false; bound];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for root in self.vertices() {
            if blocked[root.index()] || seen[root.index()] {
                continue;
            }
            seen[root.index()] = true;
            stack.push(root);
            let mut vertices = Vec::new();
            // Each internal edge is seen from both ends (a loop twice from one).
            let mut half_edges = 0usize;
            while let Some(u) = stack.pop() {
                vertices.push(u);
                for &e in self.incident(u) {
                    let w = self.opposite(e, u);
                    if blocked[w.index()] {
                        continue;
                    }
                    half_edges += 1;
                    if !seen[w.index()] {
                        seen[w.index()] = true;
                        stack.push(w);
                    }
                }
            }
            vertices.sort_unstable();
            let edge_count = half_edges / 2;
            let tree = edge_count + 1 == vertices.len();
            out.push(Component {
                vertices,
                edge_count,
                tree,
            });
        }
        out
    }

    /// Copy with vertices renumbered densely in ascending id order and edges in
    /// ascending id order. Returns the copy and `old_of_new`.
    pub fn compacted(&self) -> (MultiGraph, Vec<VertexId>) {
        let mut new_of_old = vec![u32::MAX; self.vertex_bound()];
        let mut old_of_new = Vec::with_capacity(self.vertex_count);
        let mut g = MultiGraph::with_vertices(self.vertex_count);
        for v in self.vertices() {
            new_of_old[v.index()] = old_of_new.len() as u32;
            old_of_new.push(v);
        }
        for (_, a, b) in self.edges() {
            g.add_edge(
                VertexId(new_of_old[a.index()]),
                VertexId(new_of_old[b.index()]),
            )
            .expect("compacted endpoints exist");
        }
        (g, old_of_new)
    }

    /// Full consistency check of the adjacency/edge-map pair. O(n + m).
    pub fn check_consistency(&self) -> Result<(), String> {
        let mut degree_sum = 0usize;
        for (vi, list) in self.adjacency.iter().enumerate() {
            let v = VertexId(vi as u32);
            if !self.alive[vi] && !list.is_empty() {
                return Err(format!("removed vertex {v} still has incidences"));
            }
            degree_sum += list.len();
            for (p, &e) in list.iter().enumerate() {
                let slot = self.edges[e.index()]
                    .as_ref()
                    .ok_or_else(|| format!("{v} lists dead edge {e}"))?;
                let ok = (0..2).any(|s| slot.ends[s] == v && slot.pos[s] as usize == p);
                if !ok {
                    return Err(format!("{e} does not point back to {v} at {p}"));
                }
            }
        }
        if degree_sum != 2 * self.edge_count {
            return Err(format!(
                "degree sum {degree_sum} != 2m = {}",
                2 * self.edge_count
            ));
        }
        if self.alive.iter().filter(|&&a| a).count() != self.vertex_count {
            return Err("vertex count out of sync".into());
        }
        if self.edges().count() != self.edge_count {
            return Err("edge count out of sync".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn triangle() -> (MultiGraph, [VertexId; 3]) {
        let mut g = MultiGraph::with_vertices(3);
        let v = [VertexId(0), VertexId(1), VertexId(2)];
        g.add_edge(v[0], v[1]).unwrap();
        g.add_edge(v[1], v[2]).unwrap();
        g.add_edge(v[2], v[0]).unwrap();
        (g, v)
    }

    #[test]
    fn add_vertex_ids() {
        let mut g = MultiGraph::new();
        assert_eq!(g.add_vertex(), VertexId(0));
        assert_eq!(g.vertex_count(), 1);
        let mut g = MultiGraph::with_vertices(3);
        assert_eq!(g.add_vertex(), VertexId(3));
        assert_eq!(g.vertex_count(), 4);
        assert_ne!(g.add_vertex(), g.add_vertex());
    }

    #[test]
    fn parallel_edges_and_loops() {
        let mut g = MultiGraph::with_vertices(2);
        let (a, b) = (VertexId(0), VertexId(1));
        let e1 = g.add_edge(a, b).unwrap();
        let e2 = g.add_edge(a, b).unwrap();
        assert_ne!(e1, e2);
        assert_eq!(g.multiplicity(a, b), 2);
        assert_eq!(g.edge_count(), 2);

        let before = g.degree(a);
        g.add_edge(a, a).unwrap();
        assert_eq!(g.degree(a), before + 2);
        assert_eq!(g.multiplicity(a, a), 1);
        g.add_edge(a, a).unwrap();
        assert_eq!(g.multiplicity(a, a), 2);
        g.check_consistency().unwrap();
    }

    #[test]
    fn handshake_single_edge() {
        let mut g = MultiGraph::with_vertices(2);
        g.add_edge(VertexId(0), VertexId(1)).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degree(VertexId(0)) + g.degree(VertexId(1)), 2);
    }

    #[test]
    fn unknown_ids_are_errors() {
        let mut g = MultiGraph::with_vertices(1);
        assert_eq!(
            g.add_edge(VertexId(0), VertexId(5)),
            Err(GraphError::UnknownVertex(VertexId(5)))
        );
        assert_eq!(
            g.remove_edge(EdgeId(0)),
            Err(GraphError::UnknownEdge(EdgeId(0)))
        );
        g.remove_vertex(VertexId(0)).unwrap();
        assert!(g.remove_vertex(VertexId(0)).is_err());
    }

    #[test]
    fn remove_vertex_on_triangle() {
        let (mut g, v) = triangle();
        g.remove_vertex(v[0]).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        g.check_consistency().unwrap();
    }

    #[test]
    fn remove_one_of_double_edge() {
        let mut g = MultiGraph::with_vertices(2);
        let e = g.add_edge(VertexId(0), VertexId(1)).unwrap();
        g.add_edge(VertexId(0), VertexId(1)).unwrap();
        g.remove_edge(e).unwrap();
        assert_eq!(g.multiplicity(VertexId(0), VertexId(1)), 1);
        assert!(!g.contains_edge(e));
    }

    #[test]
    fn remove_vertex_with_loop() {
        let mut g = MultiGraph::with_vertices(2);
        let l = g.add_edge(VertexId(0), VertexId(0)).unwrap();
        g.add_edge(VertexId(0), VertexId(1)).unwrap();
        let removed = g.remove_vertex(VertexId(0)).unwrap();
        assert!(removed.contains(&l));
        assert!(!g.contains_edge(l));
        assert_eq!(g.edge_count(), 0);
        g.check_consistency().unwrap();
    }

    #[test]
    fn ids_not_reused() {
        let mut g = MultiGraph::with_vertices(2);
        let e = g.add_edge(VertexId(0), VertexId(1)).unwrap();
        g.remove_edge(e).unwrap();
        assert_ne!(g.add_edge(VertexId(0), VertexId(1)).unwrap(), e);
        g.remove_vertex(VertexId(1)).unwrap();
        assert_eq!(g.add_vertex(), VertexId(2));
    }

    #[test]
    fn non_adjacent_multiplicity_zero() {
        let g = MultiGraph::with_vertices(2);
        assert_eq!(g.multiplicity(VertexId(0), VertexId(1)), 0);
    }

    #[test]
    fn components_examples() {
        let (g, v) = triangle();
        let c = g.components_avoiding(&[v[0]]);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].vertices.len(), 2);
        assert_eq!(c[0].edge_count, 1);
        assert!(c[0].tree);

        let mut d = MultiGraph::with_vertices(2);
        d.add_edge(VertexId(0), VertexId(1)).unwrap();
        d.add_edge(VertexId(0), VertexId(1)).unwrap();
        let c = d.components_avoiding(&[]);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].edge_count, 2);
        assert!(!c[0].tree);

        let mut two = MultiGraph::with_vertices(6);
        for base in [0u32, 3] {
            for (a, b) in [(0, 1), (1, 2), (2, 0)] {
                two.add_edge(VertexId(base + a), VertexId(base + b))
                    .unwrap();
            }
        }
        let c = two.components_avoiding(&[]);
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|c| !c.tree));
    }

    #[test]
    fn compacted_renumbers() {
        let (mut g, v) = triangle();
        g.remove_vertex(v[1]).unwrap();
        let (c, old) = g.compacted();
        assert_eq!(c.vertex_count(), 2);
        assert_eq!(c.edge_count(), 1);
        assert_eq!(old, vec![v[0], v[2]]);
    }

    #[derive(Clone, Debug)]
    enum Op {
        AddVertex,
        AddEdge(usize, usize),
        RemoveEdge(usize),
        RemoveVertex(usize),
    }

    fn op() -> impl Strategy<Value = Op> {
        prop_oneof![
            1 => Just(Op::AddVertex),
            4 => (0usize..64, 0usize..64).prop_map(|(a, b)| Op::AddEdge(a, b)),
            2 => (0usize..128).prop_map(Op::RemoveEdge),
            1 => (0usize..64).prop_map(Op::RemoveVertex),
        ]
    }

    fn run_ops(ops: &[Op]) -> MultiGraph {
        let mut g = MultiGraph::with_vertices(4);
        for o in ops {
            let verts: Vec<_> = g.vertices().collect();
            let edges: Vec<_> = g.edges().map(|(e, _, _)| e).collect();
            match *o {
                Op::AddVertex => {
                    g.add_vertex();
                }
                Op::AddEdge(a, b) if !verts.is_empty() => {
                    g.add_edge(verts[a % verts.len()], verts[b % verts.len()])
                        .unwrap();
                }
                Op::RemoveEdge(i) if !edges.is_empty() => {
                    g.remove_edge(edges[i % edges.len()]).unwrap();
                }
                Op::RemoveVertex(i) if !verts.is_empty() => {
                    g.remove_vertex(verts[i % verts.len()]).unwrap();
                }
                _ => {}
            }
        }
        g
    }

    /// Acyclic iff a DFS over incidences (distinguishing parallel edges) finds no back edge.
    fn dfs_acyclic(g: &MultiGraph, vertices: &[VertexId]) -> bool {
        let inside: std::collections::HashSet<_> = vertices.iter().copied().collect();
        let mut parent_edge = std::collections::HashMap::new();
        let mut stack = vec![(vertices[0], None::<EdgeId>)];
        while let Some((u, via)) = stack.pop() {
            if parent_edge.contains_key(&u) {
                return false;
            }
            parent_edge.insert(u, via);
            for &e in g.incident(u) {
                if Some(e) == via {
                    continue;
                }
                let w = g.opposite(e, u);
                if !inside.contains(&w) {
                    continue;
                }
                if w == u {
                    return false;
                }
                if parent_edge.contains_key(&w) {
                    return false;
                }
                stack.push((w, Some(e)));
            }
        }
        true
    }

    proptest! {
        #[test]
        fn mutations_keep_consistency(ops in proptest::collection::vec(op(), 0..80)) {
            let g = run_ops(&ops);
            prop_assert!(g.check_consistency().is_ok());
            let degree_sum: usize = g.vertices().map(|v| g.degree(v)).sum();
            prop_assert_eq!(degree_sum, 2 * g.edge_count());
        }

        #[test]
        fn components_partition_and_tree_flag(ops in proptest::collection::vec(op(), 0..80)) {
            let g = run_ops(&ops);
            let comps = g.components_avoiding(&[]);
            let mut owner = std::collections::HashMap::new();
            for (i, c) in comps.iter().enumerate() {
                for &v in &c.vertices {
                    prop_assert!(owner.insert(v, i).is_none());
                }
            }
            prop_assert_eq!(owner.len(), g.vertex_count());
            for (_, a, b) in g.edges() {
                prop_assert_eq!(owner[&a], owner[&b]);
            }
            for c in &comps {
                prop_assert_eq!(c.tree, dfs_acyclic(&g, &c.vertices));
            }
        }
    }
}
