//! Half-integral minimum s-cycle covers via augmenting walks.
//!
//! An s-cycle is a closed walk through `s` that does not revisit `s`, never
//! turns back along the edge it just used, and uses every edge at most twice.
//! A cover assigns `x(v) ∈ {0, ½, 1}` so that every s-cycle collects weight at
//! least one; a packing assigns weights to s-cycles so that no vertex other
//! than `s` carries load above one.
//!
//! The primal side is represented compactly as a [`BasicPacking`], an edge
//! labelling `f: E → {0, ½, 1}` in which every vertex other than `s` has one of
//! four local shapes (see [`VertexType`]). [`find_augmenting_walk`] grows the
//! packing by ½ or 1 at a time; when the search fails, its parent table yields
//! a cover of exactly the same size ([`extract_cover`]), which certifies both
//! as optimal. [`min_cycle_cover`] runs the loop under a size budget.
//!
//! All values are stored doubled (`0, 1, 2`) so equalities are exact.

use std::fmt;

use thiserror::Error;

use crate::multigraph::{EdgeId, MultiGraph, VertexId};

/// A value in `{0, ½, 1}` stored as twice its value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Half(u8);

impl Half {
    pub const ZERO: Half = Half(0);
    pub const HALF: Half = Half(1);
    pub const ONE: Half = Half(2);

    pub fn from_doubled(d: u8) -> Option<Half> {
        (d <= 2).then_some(Half(d))
    }

    #[inline]
    pub fn doubled(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "0",
            1 => "1/2",
            _ => "1",
        })
    }
}

/// Renders a doubled quantity as an exact fraction: `3 -> "3/2"`, `4 -> "2"`.
pub fn doubled_to_fraction(d: usize) -> String {
    if d.is_multiple_of(2) {
        (d / 2).to_string()
    } else {
        format!("{d}/2")
    }
}

/// Local shape of a vertex other than `s` under a basic packing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexType {
    /// No labelled edges.
    O,
    /// Two value-1 edges.
    I,
    /// Two value-½ edges.
    H,
    /// One value-1 edge and two value-½ edges.
    T,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PackingError {
    #[error("edge {0} at the source carries value 1/2")]
    HalfAtSource(EdgeId),
    #[error("{v} has {ones} value-1 and {halves} value-1/2 edges")]
    BadVertexType { v: VertexId, ones: u32, halves: u32 },
    #[error("half-integral cycle through {0} has an even number of type-T vertices")]
    EvenCycle(VertexId),
    #[error("cached counts at {0} are stale")]
    StaleCache(VertexId),
    #[error("removed edge {0} carries a nonzero value")]
    DeadEdge(EdgeId),
    #[error("packing was built for a different graph shape")]
    ShapeMismatch,
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("walk is empty or ill-formed")]
    Malformed,
    #[error("walk does not start at the source")]
    NotFromSource,
    #[error("first edge is already used by the packing")]
    FirstEdgeUsed,
    #[error("edge {0} repeats")]
    RepeatedEdge(EdgeId),
    #[error("vertex {0} repeats before the last step")]
    RepeatedVertex(VertexId),
    #[error("edge {0} does not join consecutive walk vertices")]
    Disconnected(EdgeId),
    #[error("interior vertex {0} violates the type rules")]
    BadInterior(VertexId),
    #[error("closing vertex {0} violates the type rules")]
    BadClosing(VertexId),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("graph has a self-loop at {0}")]
    SelfLoop(VertexId),
    #[error("source {0} is not a vertex of the graph")]
    UnknownSource(VertexId),
    #[error(transparent)]
    Packing(#[from] PackingError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("value-1 structure from {0} violates the reachability dichotomy")]
    Dichotomy(EdgeId),
    #[error("cover size {cover} (doubled) differs from packing size {packing}")]
    SizeMismatch { cover: usize, packing: usize },
    #[error("cover value at {0} overflows 1")]
    Overflow(VertexId),
    #[error("value-1 path from {0} does not reach the source")]
    DanglingPath(VertexId),
    #[error("cover has nonzero value at the source")]
    SourceValue,
    #[error("cover was built for a different graph shape")]
    ShapeMismatch,
}

/// Incidence lists sorted by ascending edge id, built once per computation.
pub(crate) struct Incidence {
    offsets: Vec<usize>,
    list: Vec<(EdgeId, VertexId)>,
}

impl Incidence {
    pub(crate) fn new(g: &MultiGraph) -> Self {
        let bound = g.vertex_bound();
        let mut offsets = vec![0usize; bound + 1];
        for (_, a, b) in g.edges() {
            offsets[a.index() + 1] += 1;
            offsets[b.index() + 1] += 1;
        }
        for i in 0..bound {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut list = vec![(EdgeId(0), VertexId(0)); offsets[bound]];
        for (e, a, b) in g.edges() {
            list[fill[a.index()]] = (e, b);
            fill[a.index()] += 1;
            list[fill[b.index()]] = (e, a);
            fill[b.index()] += 1;
        }
        Incidence { offsets, list }
    }

    #[inline]
    pub(crate) fn of(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        &self.list[self.offsets[v.index()]..self.offsets[v.index() + 1]]
    }
}

fn check_input(g: &MultiGraph, s: VertexId) -> Result<(), CoverError> {
    if !g.contains_vertex(s) {
        return Err(CoverError::UnknownSource(s));
    }
    if let Some((_, a, _)) = g.edges().find(|&(_, a, b)| a == b) {
        return Err(CoverError::SelfLoop(a));
    }
    Ok(())
}

/// Edge labelling `f: E → {0, ½, 1}` satisfying the basic-packing conditions,
/// with per-vertex counts of value-1 and value-½ edges kept in sync.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicPacking {
    source: VertexId,
    values: Vec<Half>,
    ones: Vec<u32>,
    halves: Vec<u32>,
}

impl BasicPacking {
    /// The all-zero packing.
    pub fn new(g: &MultiGraph, s: VertexId) -> Self {
        BasicPacking {
            source: s,
            values: vec![Half::ZERO; g.edge_bound()],
            ones: vec![0; g.vertex_bound()],
            halves: vec![0; g.vertex_bound()],
        }
    }

    /// Builds a packing from explicit edge values (unlisted edges are 0) and
    /// validates it.
    pub fn from_values(
        g: &MultiGraph,
        s: VertexId,
        values: impl IntoIterator<Item = (EdgeId, Half)>,
    ) -> Result<Self, PackingError> {
        let mut f = Self::new(g, s);
        for (e, val) in values {
            let ends = g.endpoints(e).ok_or(PackingError::UnknownEdge(e))?;
            f.set(ends, e, val);
        }
        f.validate(g)?;
        Ok(f)
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    #[inline]
    pub fn value(&self, e: EdgeId) -> Half {
        self.values[e.index()]
    }

    /// Size `½·f(δ(s))`, doubled: the number of value-1 edges at the source.
    pub fn size_doubled(&self) -> usize {
        self.ones[self.source.index()] as usize
    }

    /// Type of `v`; `None` for the source or for a vertex whose counts match no type.
    pub fn vertex_type(&self, v: VertexId) -> Option<VertexType> {
        if v == self.source {
            return None;
        }
        classify(self.ones[v.index()], self.halves[v.index()])
    }

    /// Edges with nonzero value, ascending.
    pub fn support(&self) -> impl Iterator<Item = (EdgeId, Half)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, h)| !h.is_zero())
            .map(|(i, &h)| (EdgeId(i as u32), h))
    }

    fn set(&mut self, (a, b): (VertexId, VertexId), e: EdgeId, val: Half) {
        let old = self.values[e.index()];
        if old == val {
            return;
        }
        for w in [a, b] {
            match old.0 {
                1 => self.halves[w.index()] -= 1,
                2 => self.ones[w.index()] -= 1,
                _ => {}
            }
            match val.0 {
                1 => self.halves[w.index()] += 1,
                2 => self.ones[w.index()] += 1,
                _ => {}
            }
        }
        self.values[e.index()] = val;
    }

    /// Full check of the three defining conditions and of the caches. O(n + m).
    pub fn validate(&self, g: &MultiGraph) -> Result<(), PackingError> {
        if self.values.len() != g.edge_bound() || self.ones.len() != g.vertex_bound() {
            return Err(PackingError::ShapeMismatch);
        }
        let mut ones = vec![0u32; g.vertex_bound()];
        let mut halves = vec![0u32; g.vertex_bound()];
        for (i, &val) in self.values.iter().enumerate() {
            let e = EdgeId(i as u32);
            let Some((a, b)) = g.endpoints(e) else {
                if !val.is_zero() {
                    return Err(PackingError::DeadEdge(e));
                }
                continue;
            };
            if val == Half::HALF && (a == self.source || b == self.source) {
                return Err(PackingError::HalfAtSource(e));
            }
            for w in [a, b] {
                match val.0 {
                    1 => halves[w.index()] += 1,
                    2 => ones[w.index()] += 1,
                    _ => {}
                }
            }
        }
        for v in g.vertices() {
            if ones[v.index()] != self.ones[v.index()]
                || halves[v.index()] != self.halves[v.index()]
            {
                return Err(PackingError::StaleCache(v));
            }
            if v != self.source && classify(ones[v.index()], halves[v.index()]).is_none() {
                return Err(PackingError::BadVertexType {
                    v,
                    ones: ones[v.index()],
                    halves: halves[v.index()],
                });
            }
        }
        // Odd number of type-T vertices on every half-integral cycle.
        let inc = Incidence::new(g);
        let mut seen = vec![false; g.vertex_bound()];
        for v in g.vertices() {
            if v == self.source || seen[v.index()] || halves[v.index()] == 0 {
                continue;
            }
            let (cycle, _) = half_cycle(&inc, self, v);
            let mut t_count = 0;
            for &w in &cycle {
                seen[w.index()] = true;
                if self.vertex_type(w) == Some(VertexType::T) {
                    t_count += 1;
                }
            }
            if t_count % 2 == 0 {
                return Err(PackingError::EvenCycle(v));
            }
        }
        Ok(())
    }
}

fn classify(ones: u32, halves: u32) -> Option<VertexType> {
    match (ones, halves) {
        (0, 0) => Some(VertexType::O),
        (2, 0) => Some(VertexType::I),
        (0, 2) => Some(VertexType::H),
        (1, 2) => Some(VertexType::T),
        _ => None,
    }
}

/// Follows value-½ edges from `v` (leaving along the smaller edge id) until it
/// returns to `v`. Returns the vertices `[v, ..]` and `edges[i]` joining
/// `vertices[i]` to `vertices[i + 1]` (cyclically).
fn half_cycle(inc: &Incidence, f: &BasicPacking, v: VertexId) -> (Vec<VertexId>, Vec<EdgeId>) {
    let mut vertices = vec![v];
    let mut edges = Vec::new();
    let (mut via, mut cur) = inc
        .of(v)
        .iter()
        .copied()
        .find(|&(e, _)| f.value(e) == Half::HALF)
        .expect("type-H/T vertex has a value-1/2 edge");
    edges.push(via);
    while cur != v {
        vertices.push(cur);
        let (e, next) = inc
            .of(cur)
            .iter()
            .copied()
            .find(|&(e, _)| e != via && f.value(e) == Half::HALF)
            .expect("half-integral cycle is closed");
        edges.push(e);
        via = e;
        cur = next;
    }
    (vertices, edges)
}

/// `(v₀, e₁, v₁, …, e_l, v_l)` stored as `l + 1` vertices and `l` edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentingWalk {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl AugmentingWalk {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn last(&self) -> VertexId {
        *self.vertices.last().expect("walk has vertices")
    }

    /// Index `h`: the position `i < l` with `v_i = v_l` when the walk closes
    /// somewhere other than the source, and `l` otherwise.
    pub fn pivot(&self) -> usize {
        let l = self.len();
        let last = self.last();
        if last == self.vertices[0] {
            return l;
        }
        self.vertices[..l]
            .iter()
            .position(|&v| v == last)
            .unwrap_or(l)
    }

    /// Checks every augmenting-walk condition against `f`.
    pub fn validate(&self, g: &MultiGraph, f: &BasicPacking) -> Result<(), WalkError> {
        let l = self.len();
        if l == 0 || self.vertices.len() != l + 1 {
            return Err(WalkError::Malformed);
        }
        let s = f.source();
        if self.vertices[0] != s {
            return Err(WalkError::NotFromSource);
        }
        for (i, &e) in self.edges.iter().enumerate() {
            let (a, b) = g.endpoints(e).ok_or(WalkError::Malformed)?;
            let (x, y) = (self.vertices[i], self.vertices[i + 1]);
            if !((a == x && b == y) || (a == y && b == x)) {
                return Err(WalkError::Disconnected(e));
            }
        }
        if !f.value(self.edges[0]).is_zero() {
            return Err(WalkError::FirstEdgeUsed);
        }
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(WalkError::RepeatedEdge(w[0]));
        }
        let mut prefix = self.vertices[..l].to_vec();
        prefix.sort_unstable();
        if let Some(w) = prefix.windows(2).find(|w| w[0] == w[1]) {
            return Err(WalkError::RepeatedVertex(w[0]));
        }
        let one = |e: EdgeId| f.value(e) == Half::ONE;
        for i in 1..l {
            let v = self.vertices[i];
            let ok = match f.vertex_type(v) {
                Some(VertexType::O) => true,
                Some(VertexType::I) => one(self.edges[i - 1]) || one(self.edges[i]),
                _ => false,
            };
            if !ok {
                return Err(WalkError::BadInterior(v));
            }
        }
        let last = self.last();
        match self.vertices[..l].iter().position(|&v| v == last) {
            Some(i) => {
                let ok = if last == s {
                    f.value(self.edges[l - 1]).is_zero()
                } else {
                    match f.vertex_type(last) {
                        Some(VertexType::O) => true,
                        Some(VertexType::I) => one(self.edges[i - 1]) || one(self.edges[l - 1]),
                        _ => false,
                    }
                };
                if !ok {
                    return Err(WalkError::BadClosing(last));
                }
            }
            None => {
                if !matches!(f.vertex_type(last), Some(VertexType::H | VertexType::T)) {
                    return Err(WalkError::BadClosing(last));
                }
            }
        }
        Ok(())
    }
}

/// Parent-edge table of the augmenting-walk search. `None` plays the role of
/// the sentinel: unvisited, or the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrevTable {
    source: VertexId,
    prev: Vec<Option<EdgeId>>,
    depth: Vec<u32>,
}

impl PrevTable {
    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn prev(&self, v: VertexId) -> Option<EdgeId> {
        self.prev[v.index()]
    }

    pub fn depth(&self, v: VertexId) -> u32 {
        self.depth[v.index()]
    }

    /// The source, or any vertex the search assigned a parent edge.
    pub fn is_reachable(&self, v: VertexId) -> bool {
        v == self.source || self.prev[v.index()].is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Walk(AugmentingWalk),
    NoWalk(PrevTable),
}

/// Searches for an `f`-augmenting walk from the source of `f`.
pub fn find_augmenting_walk(g: &MultiGraph, f: &BasicPacking) -> Result<SearchOutcome, CoverError> {
    check_input(g, f.source())?;
    Ok(search(g, &Incidence::new(g), f))
}

fn search(g: &MultiGraph, inc: &Incidence, f: &BasicPacking) -> SearchOutcome {
    let s = f.source();
    let bound = g.vertex_bound();
    let mut table = PrevTable {
        source: s,
        prev: vec![None; bound],
        depth: vec![0; bound],
    };
    let mut stack = vec![s];
    let val = |e: EdgeId| f.value(e).doubled();

    while let Some(u) = stack.pop() {
        let pu = table.prev[u.index()];
        let u_is_i = f.vertex_type(u) == Some(VertexType::I);
        for &(e, v) in inc.of(u) {
            if Some(e) == pu {
                continue;
            }
            if (u == s || v == s) && val(e) == 2 {
                continue;
            }
            if u_is_i
                && val(pu.expect("type-I vertices are reached by an edge")) == 0
                && val(e) == 0
            {
                continue;
            }
            if v == s {
                // Unreachable: a value-0 edge back to s either discovered u or
                // was rejected above.
                debug_assert!(false, "search stepped back into the source");
                continue;
            }
            match f.vertex_type(v) {
                Some(VertexType::H | VertexType::T) => {
                    table.prev[v.index()] = Some(e);
                    let (vertices, edges) = tree_path(g, &table, v);
                    return SearchOutcome::Walk(AugmentingWalk { vertices, edges });
                }
                vt => {
                    if !table.is_reachable(v) {
                        table.prev[v.index()] = Some(e);
                        table.depth[v.index()] = table.depth[u.index()] + 1;
                        stack.push(v);
                    } else if vt == Some(VertexType::O)
                        || val(table.prev[v.index()].expect("reached")) + val(e) >= 2
                    {
                        return SearchOutcome::Walk(revisit_walk(g, &table, u, e, v));
                    }
                }
            }
        }
    }
    SearchOutcome::NoWalk(table)
}

/// Tree path from the source down to `v`.
fn tree_path(g: &MultiGraph, table: &PrevTable, v: VertexId) -> (Vec<VertexId>, Vec<EdgeId>) {
    let mut vertices = vec![v];
    let mut edges = Vec::new();
    let mut cur = v;
    while let Some(e) = table.prev[cur.index()] {
        edges.push(e);
        cur = g.opposite(e, cur);
        vertices.push(cur);
    }
    debug_assert_eq!(cur, table.source);
    vertices.reverse();
    edges.reverse();
    (vertices, edges)
}

/// `s → u` down the tree, across `e` to `v`, then up from `v` to the lowest
/// common ancestor of `u` and `v`.
fn revisit_walk(
    g: &MultiGraph,
    table: &PrevTable,
    u: VertexId,
    e: EdgeId,
    v: VertexId,
) -> AugmentingWalk {
    let parent = |x: VertexId| g.opposite(table.prev[x.index()].expect("non-root"), x);
    let (mut a, mut b) = (u, v);
    while table.depth(a) > table.depth(b) {
        a = parent(a);
    }
    while table.depth(b) > table.depth(a) {
        b = parent(b);
    }
    while a != b {
        a = parent(a);
        b = parent(b);
    }
    let lca = a;

    let (mut vertices, mut edges) = tree_path(g, table, u);
    edges.push(e);
    vertices.push(v);
    let mut cur = v;
    while cur != lca {
        let pe = table.prev[cur.index()].expect("non-root");
        cur = g.opposite(pe, cur);
        edges.push(pe);
        vertices.push(cur);
    }
    AugmentingWalk { vertices, edges }
}

/// Returns `f` augmented along `walk`, after checking that `walk` is
/// `f`-augmenting.
pub fn augment(
    g: &MultiGraph,
    f: &BasicPacking,
    walk: &AugmentingWalk,
) -> Result<BasicPacking, CoverError> {
    walk.validate(g, f)?;
    let mut out = f.clone();
    augment_in_place(g, &Incidence::new(g), &mut out, walk);
    Ok(out)
}

fn augment_in_place(g: &MultiGraph, inc: &Incidence, f: &mut BasicPacking, walk: &AugmentingWalk) {
    let s = f.source();
    let h = walk.pivot();
    let last = walk.last();
    let last_type = f.vertex_type(last);
    #[cfg(debug_assertions)]
    let size_before = f.size_doubled();

    // The half-integral cycle must be read before the walk edges change.
    let closing_cycle = match last_type {
        Some(VertexType::H | VertexType::T) => {
            let (vertices, edges) = half_cycle(inc, f, last);
            let terminals: Vec<usize> = vertices
                .iter()
                .enumerate()
                .filter(|&(j, &w)| j == 0 || f.vertex_type(w) == Some(VertexType::T))
                .map(|(j, _)| j)
                .collect();
            Some((edges, terminals))
        }
        _ => None,
    };

    let ends = |e: EdgeId| g.endpoints(e).expect("live edge");
    for &e in &walk.edges[..h] {
        let flipped = if f.value(e).is_zero() {
            Half::ONE
        } else {
            Half::ZERO
        };
        f.set(ends(e), e, flipped);
    }

    if last != s {
        match (last_type, closing_cycle) {
            (Some(VertexType::H | VertexType::T), Some((edges, terminals))) => {
                let q = terminals.len();
                debug_assert_eq!(
                    q % 2 == 0,
                    last_type == Some(VertexType::H),
                    "type-H closes an even split, type-T an odd one"
                );
                for i in 0..q {
                    let from = terminals[i];
                    let to = if i + 1 == q {
                        edges.len()
                    } else {
                        terminals[i + 1]
                    };
                    let val = if i % 2 == 0 { Half::ZERO } else { Half::ONE };
                    for &e in &edges[from..to] {
                        f.set(ends(e), e, val);
                    }
                }
            }
            _ => {
                for &e in &walk.edges[h..] {
                    f.set(ends(e), e, Half::HALF);
                }
            }
        }
    }

    #[cfg(debug_assertions)]
    {
        let delta = f.size_doubled() - size_before;
        debug_assert_eq!(delta, if last == s { 2 } else { 1 });
        if let Err(err) = f.validate(g) {
            panic!("augmentation produced an invalid packing: {err}");
        }
    }
}

/// Half-integral vertex labelling with `x(s) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCover {
    source: VertexId,
    values: Vec<Half>,
    size_doubled: usize,
}

impl CycleCover {
    /// Builds a cover from explicit values (unlisted vertices are 0). Coverage
    /// is not checked here; see the oracle for that.
    pub fn from_values(
        g: &MultiGraph,
        s: VertexId,
        values: impl IntoIterator<Item = (VertexId, Half)>,
    ) -> Result<Self, CoverError> {
        let mut x = CycleCover {
            source: s,
            values: vec![Half::ZERO; g.vertex_bound()],
            size_doubled: 0,
        };
        for (v, h) in values {
            if !g.contains_vertex(v) {
                return Err(CoverError::ShapeMismatch);
            }
            if v == s && !h.is_zero() {
                return Err(CoverError::SourceValue);
            }
            x.size_doubled =
                x.size_doubled - x.values[v.index()].doubled() as usize + h.doubled() as usize;
            x.values[v.index()] = h;
        }
        Ok(x)
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    #[inline]
    pub fn value(&self, v: VertexId) -> Half {
        self.values.get(v.index()).copied().unwrap_or_default()
    }

    /// `2·x(V)`.
    pub fn size_doubled(&self) -> usize {
        self.size_doubled
    }

    pub(crate) fn vertex_bound(&self) -> usize {
        self.values.len()
    }

    /// `x⁻¹(1)`, ascending.
    pub fn ones(&self) -> Vec<VertexId> {
        self.nonzero()
            .filter(|&(_, h)| h == Half::ONE)
            .map(|(v, _)| v)
            .collect()
    }

    /// Vertices with nonzero value, ascending.
    pub fn nonzero(&self) -> impl Iterator<Item = (VertexId, Half)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, h)| !h.is_zero())
            .map(|(i, &h)| (VertexId(i as u32), h))
    }

    fn bump(&mut self, v: VertexId, by: Half) -> Result<(), CoverError> {
        let cur = self.values[v.index()].doubled() + by.doubled();
        let next = Half::from_doubled(cur).ok_or(CoverError::Overflow(v))?;
        self.values[v.index()] = next;
        self.size_doubled += by.doubled() as usize;
        Ok(())
    }
}

/// Builds the dual cover from the parent table of a failed search.
pub fn extract_cover(
    g: &MultiGraph,
    f: &BasicPacking,
    table: &PrevTable,
) -> Result<CycleCover, CoverError> {
    check_input(g, f.source())?;
    extract(g, &Incidence::new(g), f, table)
}

fn extract(
    g: &MultiGraph,
    inc: &Incidence,
    f: &BasicPacking,
    table: &PrevTable,
) -> Result<CycleCover, CoverError> {
    let s = f.source();
    let mut x = CycleCover {
        source: s,
        values: vec![Half::ZERO; g.vertex_bound()],
        size_doubled: 0,
    };
    let mut handled = vec![false; g.edge_bound()];
    // Edges of the current W_e, tagged by the starting edge's index + 1.
    let mut on_walk = vec![0u32; g.edge_bound()];

    for &(e, u) in inc.of(s) {
        if f.value(e) != Half::ONE || handled[e.index()] {
            continue;
        }
        handled[e.index()] = true;
        let tag = e.0 + 1;
        on_walk[e.index()] = tag;

        // Follow value-1 edges from u until returning to s or stopping at a type-T vertex.
        let mut interior = Vec::new();
        let mut closing = None;
        let (mut cur, mut via) = (u, e);
        loop {
            if cur == s {
                closing = Some(via);
                break;
            }
            interior.push(cur);
            let next = inc
                .of(cur)
                .iter()
                .copied()
                .find(|&(d, _)| d != via && f.value(d) == Half::ONE);
            match next {
                Some((d, w)) => {
                    on_walk[d.index()] = tag;
                    via = d;
                    cur = w;
                }
                None => break,
            }
        }

        if !interior.iter().any(|&v| table.is_reachable(v)) {
            x.bump(u, Half::HALF)?;
            continue;
        }
        let Some(closing) = closing else {
            return Err(CoverError::Dichotomy(e));
        };
        if !interior.iter().all(|&v| table.is_reachable(v)) {
            return Err(CoverError::Dichotomy(e));
        }
        let mut exits = interior
            .iter()
            .copied()
            .filter(|&v| table.prev(v).is_none_or(|p| on_walk[p.index()] != tag));
        let (Some(v), None) = (exits.next(), exits.next()) else {
            return Err(CoverError::Dichotomy(e));
        };
        handled[closing.index()] = true;
        if !x.value(v).is_zero() {
            return Err(CoverError::Overflow(v));
        }
        x.bump(v, Half::ONE)?;
    }

    if x.size_doubled != f.size_doubled() {
        return Err(CoverError::SizeMismatch {
            cover: x.size_doubled,
            packing: f.size_doubled(),
        });
    }
    Ok(x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverOutcome {
    /// Minimum cover with a packing of equal size as its certificate.
    Cover {
        cover: CycleCover,
        packing: BasicPacking,
        augmentations: usize,
    },
    /// The packing outgrew the budget, so every cover does too.
    ExceedsBudget {
        packing: BasicPacking,
        augmentations: usize,
    },
}

impl CoverOutcome {
    pub fn packing(&self) -> &BasicPacking {
        match self {
            CoverOutcome::Cover { packing, .. } | CoverOutcome::ExceedsBudget { packing, .. } => {
                packing
            }
        }
    }

    pub fn augmentations(&self) -> usize {
        match self {
            CoverOutcome::Cover { augmentations, .. }
            | CoverOutcome::ExceedsBudget { augmentations, .. } => *augmentations,
        }
    }
}

/// Computes a half-integral minimum s-cycle cover, or reports that the
/// packing grew beyond `budget_doubled / 2` (so no cover that small exists).
/// Runs at most `budget_doubled + 1` searches of O(m) each.
pub fn min_cycle_cover(
    g: &MultiGraph,
    s: VertexId,
    budget_doubled: usize,
) -> Result<CoverOutcome, CoverError> {
    check_input(g, s)?;
    let inc = Incidence::new(g);
    let mut f = BasicPacking::new(g, s);
    let mut augmentations = 0;
    loop {
        if f.size_doubled() > budget_doubled {
            return Ok(CoverOutcome::ExceedsBudget {
                packing: f,
                augmentations,
            });
        }
        match search(g, &inc, &f) {
            SearchOutcome::Walk(walk) => {
                debug_assert_eq!(walk.validate(g, &f), Ok(()));
                augment_in_place(g, &inc, &mut f, &walk);
                augmentations += 1;
            }
            SearchOutcome::NoWalk(table) => {
                let cover = extract(g, &inc, &f, &table)?;
                return Ok(CoverOutcome::Cover {
                    cover,
                    packing: f,
                    augmentations,
                });
            }
        }
    }
}

/// Closed walk `(s, e₁, v₁, …, e_l, s)` stored as `l + 1` vertices and `l` edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SCycle {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedCycle {
    pub cycle: SCycle,
    pub weight: Half,
}

/// An s-cycle packing listed cycle by cycle.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExplicitPacking {
    pub cycles: Vec<WeightedCycle>,
}

impl ExplicitPacking {
    pub fn weight_doubled(&self) -> usize {
        self.cycles
            .iter()
            .map(|c| c.weight.doubled() as usize)
            .sum()
    }
}

/// Expands a basic packing into explicit s-cycles of weight 1 and ½ with the
/// same total size.
pub fn explicit_packing(g: &MultiGraph, f: &BasicPacking) -> Result<ExplicitPacking, CoverError> {
    check_input(g, f.source())?;
    f.validate(g)?;
    let s = f.source();
    let inc = Incidence::new(g);
    let mut work = f.clone();
    let ends = |e: EdgeId| g.endpoints(e).expect("live edge");

    // Walks value-1 edges from `start` (leaving along `first` when given) and
    // stops at s or at a vertex with no further value-1 edge.
    let trace = |f: &BasicPacking, start: VertexId, first: Option<EdgeId>| {
        let mut vertices = vec![start];
        let mut edges = Vec::new();
        let mut via = None;
        let mut cur = start;
        loop {
            let next = match (via, first) {
                (None, Some(e0)) => Some((e0, g.opposite(e0, cur))),
                _ => inc
                    .of(cur)
                    .iter()
                    .copied()
                    .find(|&(d, _)| Some(d) != via && f.value(d) == Half::ONE),
            };
            let Some((d, w)) = next else { break };
            edges.push(d);
            vertices.push(w);
            via = Some(d);
            cur = w;
            if w == s || f.vertex_type(w) == Some(VertexType::T) {
                break;
            }
        }
        (vertices, edges)
    };

    // Cancel value-1 paths joining two type-T vertices.
    for v in g.vertices() {
        if work.vertex_type(v) != Some(VertexType::T) {
            continue;
        }
        let (vertices, edges) = trace(&work, v, None);
        if *vertices.last().expect("nonempty") != s {
            for e in edges {
                work.set(ends(e), e, Half::ZERO);
            }
        }
    }

    let mut out = ExplicitPacking::default();
    while let Some(&(e, _)) = inc.of(s).iter().find(|&&(e, _)| work.value(e) == Half::ONE) {
        let (vertices, edges) = trace(&work, s, Some(e));
        let end = *vertices.last().expect("nonempty");
        if end == s {
            for &d in &edges {
                work.set(ends(d), d, Half::ZERO);
            }
            out.cycles.push(WeightedCycle {
                cycle: SCycle { vertices, edges },
                weight: Half::ONE,
            });
            continue;
        }
        if work.vertex_type(end) != Some(VertexType::T) {
            return Err(CoverError::DanglingPath(end));
        }
        let (cyc_v, cyc_e) = half_cycle(&inc, &work, end);
        let terminals: Vec<usize> = (0..cyc_v.len())
            .filter(|&j| work.vertex_type(cyc_v[j]) == Some(VertexType::T))
            .collect();
        // Value-1 path from each terminal down to s.
        let mut legs = Vec::with_capacity(terminals.len());
        for &j in &terminals {
            let (pv, pe) = trace(&work, cyc_v[j], None);
            if *pv.last().expect("nonempty") != s {
                return Err(CoverError::DanglingPath(cyc_v[j]));
            }
            legs.push((pv, pe));
        }
        let q = terminals.len();
        for i in 0..q {
            let (from, to) = (terminals[i], terminals[(i + 1) % q]);
            // s → t_i: reversed leg i.
            let mut vertices: Vec<VertexId> = legs[i].0.iter().rev().copied().collect();
            let mut edges: Vec<EdgeId> = legs[i].1.iter().rev().copied().collect();
            // t_i → t_{i+1} along the cycle (all the way round when q = 1).
            let mut j = from;
            loop {
                edges.push(cyc_e[j]);
                j = (j + 1) % cyc_v.len();
                vertices.push(cyc_v[j]);
                if j == to {
                    break;
                }
            }
            // t_{i+1} → s.
            let (lv, le) = &legs[(i + 1) % q];
            edges.extend(le.iter().copied());
            vertices.extend(lv[1..].iter().copied());
            out.cycles.push(WeightedCycle {
                cycle: SCycle { vertices, edges },
                weight: Half::HALF,
            });
        }
        for &d in cyc_e
            .iter()
            .chain(legs.iter().flat_map(|(_, pe)| pe.iter()))
        {
            work.set(ends(d), d, Half::ZERO);
        }
    }
    Ok(out)
}
