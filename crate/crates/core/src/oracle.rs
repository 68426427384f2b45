//! Exhaustive ground truth for small graphs.
//!
//! Nothing in here shares code with the algorithms it checks: feedback vertex
//! sets come from subset enumeration with a union-find forest test, s-cycles
//! from a depth-first walk enumeration, and minimum covers from trying every
//! labelling in `{0, ½, 1}^(V∖{s})`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::cyclecover::{CycleCover, ExplicitPacking, Half, SCycle};
use crate::multigraph::{EdgeId, MultiGraph, VertexId};

pub const MAX_FVS_VERTICES: usize = 16;
pub const MAX_COVER_VERTICES: usize = 8;
/// DFS node budget for one s-cycle search.
pub const WALK_NODE_BUDGET: usize = 20_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices; the oracle handles at most {max}")]
    TooLarge { n: usize, max: usize },
    #[error("walk enumeration exceeded its node budget")]
    BudgetExhausted,
    #[error("source {0} is not a vertex of the graph")]
    UnknownSource(VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FvsResult {
    pub size: usize,
    /// Ascending.
    pub witness: Vec<VertexId>,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
}

/// True iff `g − removed` has no cycle; loops and parallel pairs count as cycles.
pub fn is_forest_without(g: &MultiGraph, removed: &[VertexId]) -> bool {
    let mut gone = vec![false; g.vertex_bound()];
    for &v in removed {
        gone[v.index()] = true;
    }
    let mut dsu = Dsu((0..g.vertex_bound()).collect());
    for (_, a, b) in g.edges() {
        if gone[a.index()] || gone[b.index()] {
            continue;
        }
        let (ra, rb) = (dsu.find(a.index()), dsu.find(b.index()));
        if ra == rb {
            return false;
        }
        dsu.0[ra] = rb;
    }
    true
}

/// Minimum feedback vertex set by enumerating subsets in increasing size
/// (lexicographic within a size).
pub fn brute_fvs(g: &MultiGraph) -> Result<FvsResult, OracleError> {
    let vs: Vec<VertexId> = g.vertices().collect();
    let n = vs.len();
    if n > MAX_FVS_VERTICES {
        return Err(OracleError::TooLarge {
            n,
            max: MAX_FVS_VERTICES,
        });
    }
    for size in 0..=n {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let chosen: Vec<VertexId> = idx.iter().map(|&i| vs[i]).collect();
            if is_forest_without(g, &chosen) {
                return Ok(FvsResult {
                    size,
                    witness: chosen,
                });
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    unreachable!("removing every vertex leaves a forest")
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// True iff `c` is an s-cycle of `g`: starts and ends at `s`, interior avoids
/// `s`, consecutive edges differ, every edge at most twice, and each edge
/// joins its neighbouring vertices.
pub fn is_s_cycle(g: &MultiGraph, s: VertexId, c: &SCycle) -> bool {
    let l = c.edges.len();
    if l == 0 || c.vertices.len() != l + 1 {
        return false;
    }
    if c.vertices[0] != s || c.vertices[l] != s {
        return false;
    }
    if c.vertices[1..l].contains(&s) {
        return false;
    }
    for i in 0..l {
        let Some((a, b)) = g.endpoints(c.edges[i]) else {
            return false;
        };
        let (x, y) = (c.vertices[i], c.vertices[i + 1]);
        if !((a == x && b == y) || (a == y && b == x)) {
            return false;
        }
        if i + 1 < l && c.edges[i] == c.edges[i + 1] {
            return false;
        }
    }
    let mut sorted = c.edges.clone();
    sorted.sort_unstable();
    !sorted.windows(3).any(|w| w[0] == w[2])
}

/// `x(V(C))`, doubled.
pub fn cycle_weight_doubled(x: &CycleCover, c: &SCycle) -> usize {
    c.vertices
        .iter()
        .map(|&v| x.value(v).doubled() as usize)
        .sum()
}

/// Depth-first search for an s-cycle `C` with `x(V(C)) < 1`.
pub fn find_violating_s_cycle(
    g: &MultiGraph,
    s: VertexId,
    x: &CycleCover,
) -> Result<Option<SCycle>, OracleError> {
    if !g.contains_vertex(s) {
        return Err(OracleError::UnknownSource(s));
    }
    let mut search = WalkSearch {
        g,
        s,
        x,
        home: return_costs(g, s, x),
        uses: vec![0u8; g.edge_bound()],
        vertices: vec![s],
        edges: Vec::new(),
        nodes: 0,
    };
    search.extend(s, None, 0)
}

/// `home[v]`: least doubled weight of a path from `v` to a neighbour of `s`,
/// counting `v` itself. Ignores the walk constraints, so it is a lower bound
/// on any way back.
fn return_costs(g: &MultiGraph, s: VertexId, x: &CycleCover) -> Vec<usize> {
    let mut home = vec![usize::MAX; g.vertex_bound()];
    let mut heap = BinaryHeap::new();
    for &e in g.incident(s) {
        let v = g.opposite(e, s);
        let c = x.value(v).doubled() as usize;
        if v != s && c < home[v.index()] {
            home[v.index()] = c;
            heap.push(Reverse((c, v)));
        }
    }
    while let Some(Reverse((c, v))) = heap.pop() {
        if c > home[v.index()] {
            continue;
        }
        for &e in g.incident(v) {
            let u = g.opposite(e, v);
            let cu = c + x.value(u).doubled() as usize;
            if u != s && cu < home[u.index()] {
                home[u.index()] = cu;
                heap.push(Reverse((cu, u)));
            }
        }
    }
    home
}

struct WalkSearch<'a> {
    g: &'a MultiGraph,
    s: VertexId,
    x: &'a CycleCover,
    home: Vec<usize>,
    uses: Vec<u8>,
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
    nodes: usize,
}

impl WalkSearch<'_> {
    fn extend(
        &mut self,
        at: VertexId,
        last: Option<EdgeId>,
        weight: usize,
    ) -> Result<Option<SCycle>, OracleError> {
        self.nodes += 1;
        if self.nodes > WALK_NODE_BUDGET {
            return Err(OracleError::BudgetExhausted);
        }
        let mut incident = self.g.incident(at).to_vec();
        incident.sort_unstable();
        incident.dedup();
        for e in incident {
            if Some(e) == last || self.uses[e.index()] >= 2 {
                continue;
            }
            let w = self.g.opposite(e, at);
            if w == self.s {
                if at == self.s {
                    continue;
                }
                let mut vertices = self.vertices.clone();
                vertices.push(w);
                let mut edges = self.edges.clone();
                edges.push(e);
                return Ok(Some(SCycle { vertices, edges }));
            }
            let wt = weight + self.x.value(w).doubled() as usize;
            if wt >= 2 || weight.saturating_add(self.home[w.index()]) >= 2 {
                continue;
            }
            self.uses[e.index()] += 1;
            self.vertices.push(w);
            self.edges.push(e);
            let found = self.extend(w, Some(e), wt)?;
            self.uses[e.index()] -= 1;
            self.vertices.pop();
            self.edges.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// Minimum s-cycle cover by exhaustive search, lexicographically first among
/// minima (vertex-id order, `0 < ½ < 1`).
pub fn brute_min_cover(g: &MultiGraph, s: VertexId) -> Result<CycleCover, OracleError> {
    if !g.contains_vertex(s) {
        return Err(OracleError::UnknownSource(s));
    }
    let others: Vec<VertexId> = g.vertices().filter(|&v| v != s).collect();
    if others.len() + 1 > MAX_COVER_VERTICES {
        return Err(OracleError::TooLarge {
            n: others.len() + 1,
            max: MAX_COVER_VERTICES,
        });
    }
    let k = others.len();
    // Enumerating by total size first makes the first feasible labelling minimum.
    for total in 0..=2 * k {
        let mut digits = vec![0u8; k];
        if let Some(found) = first_feasible(g, s, &others, &mut digits, 0, total)? {
            return Ok(found);
        }
    }
    unreachable!("x ≡ 1 covers every s-cycle")
}

fn first_feasible(
    g: &MultiGraph,
    s: VertexId,
    others: &[VertexId],
    digits: &mut Vec<u8>,
    pos: usize,
    remaining: usize,
) -> Result<Option<CycleCover>, OracleError> {
    if pos == digits.len() {
        if remaining != 0 {
            return Ok(None);
        }
        let x = CycleCover::from_values(
            g,
            s,
            others
                .iter()
                .zip(digits.iter())
                .map(|(&v, &d)| (v, Half::from_doubled(d).expect("digit"))),
        )
        .expect("valid labelling");
        return Ok(match find_violating_s_cycle(g, s, &x)? {
            None => Some(x),
            Some(_) => None,
        });
    }
    let left = digits.len() - pos - 1;
    for d in 0..=2u8 {
        let d_us = d as usize;
        if d_us > remaining || remaining - d_us > 2 * left {
            continue;
        }
        digits[pos] = d;
        if let Some(x) = first_feasible(g, s, others, digits, pos + 1, remaining - d_us)? {
            return Ok(Some(x));
        }
    }
    digits[pos] = 0;
    Ok(None)
}

/// True iff every listed cycle is an s-cycle with positive weight and every
/// vertex other than `s` carries total load at most one.
pub fn verify_packing(g: &MultiGraph, s: VertexId, p: &ExplicitPacking) -> bool {
    let mut load = vec![0usize; g.vertex_bound()];
    for wc in &p.cycles {
        if wc.weight.is_zero() || !is_s_cycle(g, s, &wc.cycle) {
            return false;
        }
        let l = wc.cycle.edges.len();
        for &v in &wc.cycle.vertices[1..l] {
            load[v.index()] += wc.weight.doubled() as usize;
        }
    }
    load.iter().all(|&d| d <= 2)
}
