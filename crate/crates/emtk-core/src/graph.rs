//! Colored graphs, perfect matchings, and alternating structures.
//!
//! Vertices are dense indices `0..n`. Edges store their smaller endpoint
//! first and compare lexicographically; that ordering is the canonical order
//! behind every deterministic tie-break in the crate. A coloring is the set
//! of red edges — every other edge is blue.
//!
//! The induced weight of an edge `e` under a perfect matching `M` is
//!
//! * `-1` if `e` is red and in `M`,
//! * `+1` if `e` is red and not in `M`,
//! * `0`  if `e` is blue.
//!
//! Swapping `M` with a perfect matching `M'` changes the red count by the
//! induced weight of the symmetric difference, which is why most of the
//! machinery in [`crate::structure`] and [`crate::karzanov`] reasons about
//! weights of alternating paths and cycles instead of raw red counts.

use std::collections::BTreeSet;
use std::fmt;

use crate::{Error, Result};

pub type Vertex = usize;

/// Undirected edge with endpoints stored in increasing order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: Vertex,
    v: Vertex,
}

impl Edge {
    /// Canonical edge `{a, b}`. Self-loops are rejected at graph construction
    /// with a domain error, so a loop here is a caller bug.
    pub fn new(a: Vertex, b: Vertex) -> Self {
        assert!(a != b, "self-loop at vertex {a}");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn endpoints(self) -> (Vertex, Vertex) {
        (self.u, self.v)
    }

    pub fn touches(self, w: Vertex) -> bool {
        self.u == w || self.v == w
    }

    /// The endpoint that is not `w`. Panics if `w` is not an endpoint.
    pub fn other(self, w: Vertex) -> Vertex {
        if self.u == w {
            self.v
        } else {
            assert_eq!(self.v, w, "vertex {w} not on edge {self}");
            self.u
        }
    }

    pub fn shares_vertex(self, other: Edge) -> bool {
        self.touches(other.u) || self.touches(other.v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Color {
    Red,
    Blue,
}

/// Side labels for bipartite graphs.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Side {
    X,
    Y,
}

/// Simple undirected graph with a red/blue edge coloring and an optional
/// bipartition. Immutable after construction; recoloring produces a new graph
/// sharing the same structure.
#[derive(Clone)]
pub struct ColoredGraph {
    n: usize,
    edges: Vec<Edge>,
    red: BTreeSet<Edge>,
    adj: Vec<Vec<Vertex>>,
    adj_matrix: Vec<bool>,
    sides: Option<Vec<Side>>,
}

impl ColoredGraph {
    pub fn new<E, R>(n: usize, edges: E, red: R) -> Result<Self>
    where
        E: IntoIterator<Item = (Vertex, Vertex)>,
        R: IntoIterator<Item = (Vertex, Vertex)>,
    {
        Self::build(n, edges, red, None)
    }

    /// Bipartite constructor: every edge must cross the two sides.
    pub fn bipartite<E, R>(n: usize, sides: Vec<Side>, edges: E, red: R) -> Result<Self>
    where
        E: IntoIterator<Item = (Vertex, Vertex)>,
        R: IntoIterator<Item = (Vertex, Vertex)>,
    {
        Self::build(n, edges, red, Some(sides))
    }

    fn build<E, R>(n: usize, edges: E, red: R, sides: Option<Vec<Side>>) -> Result<Self>
    where
        E: IntoIterator<Item = (Vertex, Vertex)>,
        R: IntoIterator<Item = (Vertex, Vertex)>,
    {
        if let Some(s) = &sides {
            if s.len() != n {
                return Err(Error::BipartitionSize {
                    expected: n,
                    got: s.len(),
                });
            }
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for w in [a, b] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let e = Edge::new(a, b);
            if let Some(s) = &sides {
                if s[e.u] == s[e.v] {
                    return Err(Error::IntraSideEdge(e));
                }
            }
            if !set.insert(e) {
                return Err(Error::DuplicateEdge(e));
            }
        }
        let edges: Vec<Edge> = set.iter().copied().collect();
        let mut adj = vec![Vec::new(); n];
        let mut adj_matrix = vec![false; n * n];
        for e in &edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
            adj_matrix[e.u * n + e.v] = true;
            adj_matrix[e.v * n + e.u] = true;
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut graph = ColoredGraph {
            n,
            edges,
            red: BTreeSet::new(),
            adj,
            adj_matrix,
            sides,
        };
        let mut red_set = BTreeSet::new();
        for (a, b) in red {
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let e = Edge::new(a, b);
            if !graph.contains_edge(e) {
                return Err(Error::UnknownEdge(e));
            }
            red_set.insert(e);
        }
        graph.red = red_set;
        Ok(graph)
    }

    /// Same structure, new red set.
    pub fn with_red_edges<R>(&self, red: R) -> Result<Self>
    where
        R: IntoIterator<Item = Edge>,
    {
        let mut red_set = BTreeSet::new();
        for e in red {
            if !self.contains_edge(e) {
                return Err(Error::UnknownEdge(e));
            }
            red_set.insert(e);
        }
        let mut g = self.clone();
        g.red = red_set;
        Ok(g)
    }

    /// Swaps the two color classes. Involutive.
    pub fn invert_coloring(&self) -> Self {
        let red = self
            .edges
            .iter()
            .copied()
            .filter(|e| !self.red.contains(e))
            .collect();
        let mut g = self.clone();
        g.red = red;
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// All edges in canonical order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn red_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.red.iter().copied()
    }

    pub fn blue_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges
            .iter()
            .copied()
            .filter(move |e| !self.red.contains(e))
    }

    pub fn red_edge_count(&self) -> usize {
        self.red.len()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        e.v < self.n && self.adj_matrix[e.u * self.n + e.v]
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        a != b && a < self.n && b < self.n && self.adj_matrix[a * self.n + b]
    }

    pub fn color(&self, e: Edge) -> Result<Color> {
        if !self.contains_edge(e) {
            return Err(Error::UnknownEdge(e));
        }
        Ok(if self.red.contains(&e) {
            Color::Red
        } else {
            Color::Blue
        })
    }

    pub fn is_red(&self, e: Edge) -> Result<bool> {
        Ok(self.color(e)? == Color::Red)
    }

    /// Number of red edges in `edges`; `r(F)` in the usual notation.
    pub fn count_red<I>(&self, edges: I) -> Result<usize>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut r = 0;
        for e in edges {
            if self.is_red(e)? {
                r += 1;
            }
        }
        Ok(r)
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn sides(&self) -> Option<&[Side]> {
        self.sides.as_deref()
    }

    /// Validates `edges` as a perfect matching of this graph.
    pub fn perfect_matching<I>(&self, edges: I) -> Result<PerfectMatching>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut list: Vec<Edge> = Vec::new();
        let mut partner = vec![usize::MAX; self.n];
        for e in edges {
            if !self.contains_edge(e) {
                return Err(Error::UnknownEdge(e));
            }
            let (a, b) = e.endpoints();
            for w in [a, b] {
                if partner[w] != usize::MAX {
                    return Err(Error::NotPerfectMatching(format!(
                        "vertex {w} is covered twice"
                    )));
                }
            }
            partner[a] = b;
            partner[b] = a;
            list.push(e);
        }
        if let Some(w) = partner.iter().position(|&p| p == usize::MAX) {
            return Err(Error::NotPerfectMatching(format!(
                "vertex {w} is not covered"
            )));
        }
        list.sort_unstable();
        let red_count = self.count_red(list.iter().copied())?;
        Ok(PerfectMatching {
            edges: list,
            partner,
            red_count,
        })
    }
}

impl fmt::Debug for ColoredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ColoredGraph(n={}, m={}, red={:?})", self.n, self.m(), self.red)
    }
}

/// Perfect matching of a specific colored graph, with its red count cached at
/// validation time. Ordering compares the sorted edge lists, which makes the
/// smallest matching under `Ord` the canonical representative of any set.
#[derive(Clone)]
pub struct PerfectMatching {
    edges: Vec<Edge>,
    partner: Vec<Vertex>,
    red_count: usize,
}

impl PerfectMatching {
    /// Edges in canonical order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn red_count(&self) -> usize {
        self.red_count
    }

    pub fn blue_count(&self) -> usize {
        self.edges.len() - self.red_count
    }

    /// Number of matched pairs, `n/2`.
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, e: Edge) -> bool {
        let (a, b) = e.endpoints();
        b < self.partner.len() && self.partner[a] == b
    }

    pub fn partner_of(&self, v: Vertex) -> Vertex {
        self.partner[v]
    }

    /// Red edges of the matching under the coloring it was validated against.
    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges.iter().copied().collect()
    }
}

impl PartialEq for PerfectMatching {
    fn eq(&self, other: &Self) -> bool {
        self.edges == other.edges
    }
}

impl Eq for PerfectMatching {}

impl PartialOrd for PerfectMatching {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PerfectMatching {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.edges.cmp(&other.edges)
    }
}

impl std::hash::Hash for PerfectMatching {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.edges.hash(state);
    }
}

impl fmt::Debug for PerfectMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PM{:?}", self.edges)
    }
}

/// Weight of `e` induced by `m`: red matching edges count -1, red non-matching
/// edges +1, blue edges 0.
pub fn induced_weight(g: &ColoredGraph, m: &PerfectMatching, e: Edge) -> Result<i64> {
    if !g.is_red(e)? {
        return Ok(0);
    }
    Ok(if m.contains(e) { -1 } else { 1 })
}

/// Sum of induced weights over an edge set.
pub fn weight_of_set<I>(g: &ColoredGraph, m: &PerfectMatching, edges: I) -> Result<i64>
where
    I: IntoIterator<Item = Edge>,
{
    let mut w = 0;
    for e in edges {
        w += induced_weight(g, m, e)?;
    }
    Ok(w)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AltKind {
    Path,
    Cycle,
}

/// Simple path or cycle whose edges alternate between matching and
/// non-matching edges of a fixed perfect matching, together with the prefix
/// sums of induced weights along the traversal.
///
/// For a structure with edges `e_1..e_l`, `prefix_sums` holds `S_0..S_l`
/// where `S_0 = 0` and `S_i - S_{i-1}` is the induced weight of `e_i`. The
/// total weight is `S_l` and any contiguous stretch `e_i..e_j` weighs
/// `S_j - S_{i-1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct AlternatingStructure {
    kind: AltKind,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    in_matching: Vec<bool>,
    prefix_sums: Vec<i64>,
}

impl AlternatingStructure {
    /// Path through `vertices` in order. Requires at least one edge, distinct
    /// vertices, edges present in `g`, and strict alternation.
    pub fn path(g: &ColoredGraph, m: &PerfectMatching, vertices: &[Vertex]) -> Result<Self> {
        Self::build(g, m, vertices, AltKind::Path)
    }

    /// Cycle through `vertices` in order, closing from the last vertex back
    /// to the first. Alternation across the closing edge forces even length.
    pub fn cycle(g: &ColoredGraph, m: &PerfectMatching, vertices: &[Vertex]) -> Result<Self> {
        Self::build(g, m, vertices, AltKind::Cycle)
    }

    fn build(
        g: &ColoredGraph,
        m: &PerfectMatching,
        vertices: &[Vertex],
        kind: AltKind,
    ) -> Result<Self> {
        let min_len = match kind {
            AltKind::Path => 2,
            AltKind::Cycle => 4,
        };
        if vertices.len() < min_len {
            return Err(Error::InvalidStructure(format!(
                "need at least {min_len} vertices, got {}",
                vertices.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for &v in vertices {
            if v >= g.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
            }
            if !seen.insert(v) {
                return Err(Error::InvalidStructure(format!(
                    "vertex {v} repeats in the traversal"
                )));
            }
        }
        let pairs: Vec<(Vertex, Vertex)> = match kind {
            AltKind::Path => vertices.windows(2).map(|w| (w[0], w[1])).collect(),
            AltKind::Cycle => (0..vertices.len())
                .map(|i| (vertices[i], vertices[(i + 1) % vertices.len()]))
                .collect(),
        };
        let mut edges = Vec::with_capacity(pairs.len());
        let mut in_matching = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            if !g.has_edge(a, b) {
                return Err(Error::UnknownEdge(Edge::new(a, b)));
            }
            let e = Edge::new(a, b);
            edges.push(e);
            in_matching.push(m.contains(e));
        }
        for i in 0..edges.len() {
            let j = (i + 1) % edges.len();
            if (kind == AltKind::Cycle || j > 0) && in_matching[i] == in_matching[j] && i != j {
                return Err(Error::InvalidStructure(format!(
                    "edges {} and {} do not alternate",
                    edges[i], edges[j]
                )));
            }
        }
        if kind == AltKind::Cycle && vertices.len() % 2 != 0 {
            return Err(Error::InvalidStructure(
                "alternating cycles have even length".into(),
            ));
        }
        let mut prefix_sums = Vec::with_capacity(edges.len() + 1);
        prefix_sums.push(0);
        let mut s = 0;
        for &e in &edges {
            s += induced_weight(g, m, e)?;
            prefix_sums.push(s);
        }
        Ok(AlternatingStructure {
            kind,
            vertices: vertices.to_vec(),
            edges,
            in_matching,
            prefix_sums,
        })
    }

    pub fn kind(&self) -> AltKind {
        self.kind
    }

    /// Traversal order. For cycles the closing edge returns to `vertices[0]`.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_matching_edge(&self, i: usize) -> bool {
        self.in_matching[i]
    }

    /// `S_0..S_l`.
    pub fn prefix_sums(&self) -> &[i64] {
        &self.prefix_sums
    }

    /// Total induced weight `S_l`.
    pub fn weight(&self) -> i64 {
        *self.prefix_sums.last().unwrap()
    }

    /// Induced weight of the `i`-th edge.
    pub fn edge_weight(&self, i: usize) -> i64 {
        self.prefix_sums[i + 1] - self.prefix_sums[i]
    }

    /// Red edges carry weight -1 or +1, blue edges 0, so the red count can be
    /// read off the prefix sums without consulting the graph.
    pub fn red_count(&self) -> usize {
        (0..self.len()).filter(|&i| self.edge_weight(i) != 0).count()
    }

    pub fn blue_count(&self) -> usize {
        self.len() - self.red_count()
    }

    /// Indices of matching edges, in traversal order.
    pub fn matching_edge_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.in_matching[i])
    }

    /// Contiguous stretch `e_i..=e_j` of a path as a path. Panics on a bad
    /// range; callers slice only validated index ranges.
    pub fn subpath(&self, i: usize, j: usize) -> AlternatingStructure {
        assert_eq!(self.kind, AltKind::Path, "subpath of a cycle needs arc()");
        assert!(i <= j && j < self.len(), "bad subpath range {i}..={j}");
        let base = self.prefix_sums[i];
        AlternatingStructure {
            kind: AltKind::Path,
            vertices: self.vertices[i..=j + 1].to_vec(),
            edges: self.edges[i..=j].to_vec(),
            in_matching: self.in_matching[i..=j].to_vec(),
            prefix_sums: self.prefix_sums[i..=j + 1].iter().map(|s| s - base).collect(),
        }
    }

    /// Arc of a cycle: `len` consecutive edges starting at edge index
    /// `start`, wrapping around, returned as a path.
    pub fn arc(&self, start: usize, len: usize) -> AlternatingStructure {
        assert_eq!(self.kind, AltKind::Cycle, "arc() is for cycles");
        assert!(len >= 1 && len < self.len(), "bad arc length {len}");
        let l = self.len();
        let mut vertices = Vec::with_capacity(len + 1);
        let mut edges = Vec::with_capacity(len);
        let mut in_matching = Vec::with_capacity(len);
        let mut prefix_sums = Vec::with_capacity(len + 1);
        prefix_sums.push(0);
        let mut s = 0;
        vertices.push(self.vertices[start % l]);
        for t in 0..len {
            let i = (start + t) % l;
            vertices.push(self.vertices[(i + 1) % l]);
            edges.push(self.edges[i]);
            in_matching.push(self.in_matching[i]);
            s += self.edge_weight(i);
            prefix_sums.push(s);
        }
        AlternatingStructure {
            kind: AltKind::Path,
            vertices,
            edges,
            in_matching,
            prefix_sums,
        }
    }
}

impl fmt::Debug for AlternatingStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?}{:?} w={}",
            self.kind,
            self.vertices,
            self.weight()
        )
    }
}

/// Cycle decomposition of the symmetric difference of two perfect matchings.
/// Alternation flags and prefix sums in the cycles refer to the first
/// matching passed to [`decompose_symmetric_difference`].
#[derive(Clone, Debug)]
pub struct SymmetricDifference {
    pub cycles: Vec<AlternatingStructure>,
    pub red_edges: usize,
    pub blue_edges: usize,
}

impl SymmetricDifference {
    pub fn edge_count(&self) -> usize {
        self.cycles.iter().map(|c| c.len()).sum()
    }

    pub fn total_weight(&self) -> i64 {
        self.cycles.iter().map(|c| c.weight()).sum()
    }
}

/// Splits `m1 △ m2` into its alternating cycles. Each cycle starts at its
/// smallest vertex and walks towards that vertex's smaller neighbor, so the
/// decomposition is canonical.
pub fn decompose_symmetric_difference(
    g: &ColoredGraph,
    m1: &PerfectMatching,
    m2: &PerfectMatching,
) -> Result<SymmetricDifference> {
    let diff: BTreeSet<Edge> = m1
        .edges()
        .iter()
        .chain(m2.edges())
        .copied()
        .filter(|e| m1.contains(*e) != m2.contains(*e))
        .collect();
    let mut red_edges = 0;
    let mut blue_edges = 0;
    let mut next: Vec<Vec<Vertex>> = vec![Vec::new(); g.n()];
    for &e in &diff {
        if g.is_red(e)? {
            red_edges += 1;
        } else {
            blue_edges += 1;
        }
        let (a, b) = e.endpoints();
        next[a].push(b);
        next[b].push(a);
    }
    let mut visited = vec![false; g.n()];
    let mut cycles = Vec::new();
    for start in 0..g.n() {
        if next[start].is_empty() || visited[start] {
            continue;
        }
        debug_assert_eq!(next[start].len(), 2, "difference vertices have degree 2");
        let mut walk = vec![start];
        visited[start] = true;
        let mut prev = start;
        let mut cur = *next[start].iter().min().unwrap();
        while cur != start {
            visited[cur] = true;
            walk.push(cur);
            let step = next[cur]
                .iter()
                .copied()
                .find(|&w| w != prev)
                .expect("degree-2 walk continues");
            prev = cur;
            cur = step;
        }
        cycles.push(AlternatingStructure::cycle(g, m1, &walk)?);
    }
    Ok(SymmetricDifference {
        cycles,
        red_edges,
        blue_edges,
    })
}

/// `dist(m1, m2)`: the smaller of the red and blue edge counts of the
/// symmetric difference.
pub fn distance(g: &ColoredGraph, m1: &PerfectMatching, m2: &PerfectMatching) -> Result<usize> {
    let mut red = 0;
    let mut blue = 0;
    for &e in m1.edges().iter().chain(m2.edges()) {
        if m1.contains(e) != m2.contains(e) {
            if g.is_red(e)? {
                red += 1;
            } else {
                blue += 1;
            }
        }
    }
    Ok(red.min(blue))
}
