//! Graph-class generators with self-validating certificates.
//!
//! Each generator returns an uncolored graph (every edge blue) together with
//! a [`Certificate`] pinning down why the graph belongs to its class; the
//! certificate is validated against the graph before being handed out, so a
//! buggy construction fails loudly at the source. Colors are applied
//! afterwards with [`random_coloring`].
//!
//! Randomized generators draw from a seeded ChaCha stream: equal seeds give
//! equal instances on every platform.

use crate::graph::{ColoredGraph, Edge, PerfectMatching, Side, Vertex};
use crate::structure::PshortQuery;
use crate::{Error, Rational, Result};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Names for the graph classes the toolkit knows how to generate or tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassTag {
    Chain,
    ChainPshortCounterexample,
    CompleteRPartite,
    UnitInterval,
    Interval,
    BipUnitInterval,
    BipInterval,
    NeighborhoodDiversity,
    Gnp,
    BoundedBipIndependence,
    Custom,
}

impl ClassTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassTag::Chain => "chain",
            ClassTag::ChainPshortCounterexample => "chain_pshort_counterexample",
            ClassTag::CompleteRPartite => "complete_r_partite",
            ClassTag::UnitInterval => "unit_interval",
            ClassTag::Interval => "interval",
            ClassTag::BipUnitInterval => "bip_unit_interval",
            ClassTag::BipInterval => "bip_interval",
            ClassTag::NeighborhoodDiversity => "neighborhood_diversity",
            ClassTag::Gnp => "gnp",
            ClassTag::BoundedBipIndependence => "bounded_bip_independence",
            ClassTag::Custom => "custom",
        }
    }

    pub const ALL: [ClassTag; 11] = [
        ClassTag::Chain,
        ClassTag::ChainPshortCounterexample,
        ClassTag::CompleteRPartite,
        ClassTag::UnitInterval,
        ClassTag::Interval,
        ClassTag::BipUnitInterval,
        ClassTag::BipInterval,
        ClassTag::NeighborhoodDiversity,
        ClassTag::Gnp,
        ClassTag::BoundedBipIndependence,
        ClassTag::Custom,
    ];
}

impl std::fmt::Display for ClassTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ClassTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown graph class `{s}`")))
    }
}

/// Structural evidence that a graph belongs to its class. Fields are exact
/// (rational interval endpoints, explicit partitions) so certificates survive
/// serialization round-trips unchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Vertices grouped into independent parts; edges exactly across parts.
    CompleteRPartite { parts: Vec<Vec<Vertex>> },
    /// Chain graph given by its left degree profile: left vertex `i` is
    /// adjacent to the top `profile[i]` right vertices, so neighborhoods are
    /// nested on both sides.
    Chain { profile: Vec<usize> },
    /// Closed intervals per vertex; adjacency is interval intersection,
    /// restricted to cross-side pairs when `bipartite_split` is set (the
    /// first `split` vertices form one side).
    Intervals {
        intervals: Vec<(Rational, Rational)>,
        bipartite_split: Option<usize>,
    },
    /// Unit-length closed intervals given by their centers; adjacency is
    /// `|c_u - c_v| <= 1`.
    UnitIntervals {
        centers: Vec<Rational>,
        bipartite_split: Option<usize>,
    },
    /// Partition into type classes: inside a class all vertices are pairwise
    /// adjacent (clique) or pairwise non-adjacent, and any two classes are
    /// joined completely or not at all, per `type_edges`.
    NeighborhoodDiversity {
        classes: Vec<Vec<Vertex>>,
        clique: Vec<bool>,
        type_edges: Vec<(usize, usize)>,
    },
    /// Seeded Bernoulli edge sampling with exact probability `p`.
    Gnp { n: usize, p: Rational, seed: u64 },
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::CertificateMismatch(msg()))
    }
}

/// Check every adjacency claim a certificate makes against the graph.
pub fn validate_certificate(g: &ColoredGraph, cert: &Certificate) -> Result<()> {
    let n = g.n();
    match cert {
        Certificate::CompleteRPartite { parts } => {
            let mut part_of = vec![usize::MAX; n];
            let mut seen = 0usize;
            for (idx, part) in parts.iter().enumerate() {
                for &v in part {
                    check(v < n && part_of[v] == usize::MAX, || {
                        format!("vertex {v} missing or repeated in the partition")
                    })?;
                    part_of[v] = idx;
                    seen += 1;
                }
            }
            check(seen == n, || "partition does not cover the vertex set".into())?;
            for u in 0..n {
                for v in (u + 1)..n {
                    let want = part_of[u] != part_of[v];
                    check(g.has_edge(u, v) == want, || {
                        format!("adjacency of {u},{v} contradicts the partition")
                    })?;
                }
            }
            Ok(())
        }
        Certificate::Chain { profile } => {
            let p = profile.len();
            check(n == 2 * p, || format!("expected {} vertices, graph has {n}", 2 * p))?;
            check(profile.windows(2).all(|w| w[0] <= w[1]), || {
                "degree profile is not nondecreasing".into()
            })?;
            check(profile.last().is_none_or(|&d| d <= p), || {
                "degree exceeds the number of right vertices".into()
            })?;
            for u in 0..n {
                for v in (u + 1)..n {
                    let want = u < p && v >= p && (v - p) + profile[u] >= p;
                    check(g.has_edge(u, v) == want, || {
                        format!("adjacency of {u},{v} contradicts the degree profile")
                    })?;
                }
            }
            Ok(())
        }
        Certificate::Intervals {
            intervals,
            bipartite_split,
        } => {
            check(intervals.len() == n, || "one interval per vertex required".into())?;
            for (v, (lo, hi)) in intervals.iter().enumerate() {
                check(lo <= hi, || format!("interval of vertex {v} is empty"))?;
            }
            validate_split(g, *bipartite_split)?;
            for u in 0..n {
                for v in (u + 1)..n {
                    let cross = match bipartite_split {
                        None => true,
                        Some(s) => (u < *s) != (v < *s),
                    };
                    let (alo, ahi) = intervals[u];
                    let (blo, bhi) = intervals[v];
                    let want = cross && alo <= bhi && blo <= ahi;
                    check(g.has_edge(u, v) == want, || {
                        format!("adjacency of {u},{v} contradicts the intervals")
                    })?;
                }
            }
            Ok(())
        }
        Certificate::UnitIntervals {
            centers,
            bipartite_split,
        } => {
            check(centers.len() == n, || "one center per vertex required".into())?;
            validate_split(g, *bipartite_split)?;
            let one = Rational::from_integer(1);
            for u in 0..n {
                for v in (u + 1)..n {
                    let cross = match bipartite_split {
                        None => true,
                        Some(s) => (u < *s) != (v < *s),
                    };
                    let gap = if centers[u] >= centers[v] {
                        centers[u] - centers[v]
                    } else {
                        centers[v] - centers[u]
                    };
                    let want = cross && gap <= one;
                    check(g.has_edge(u, v) == want, || {
                        format!("adjacency of {u},{v} contradicts the unit intervals")
                    })?;
                }
            }
            Ok(())
        }
        Certificate::NeighborhoodDiversity {
            classes,
            clique,
            type_edges,
        } => {
            check(classes.len() == clique.len(), || {
                "one clique flag per class required".into()
            })?;
            let mut class_of = vec![usize::MAX; n];
            let mut seen = 0usize;
            for (idx, class) in classes.iter().enumerate() {
                for &v in class {
                    check(v < n && class_of[v] == usize::MAX, || {
                        format!("vertex {v} missing or repeated in the type partition")
                    })?;
                    class_of[v] = idx;
                    seen += 1;
                }
            }
            check(seen == n, || "type partition does not cover the vertex set".into())?;
            let joined = |a: usize, b: usize| {
                type_edges
                    .iter()
                    .any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
            };
            for u in 0..n {
                for v in (u + 1)..n {
                    let (cu, cv) = (class_of[u], class_of[v]);
                    let want = if cu == cv { clique[cu] } else { joined(cu, cv) };
                    check(g.has_edge(u, v) == want, || {
                        format!("adjacency of {u},{v} contradicts the type structure")
                    })?;
                }
            }
            Ok(())
        }
        Certificate::Gnp { n: cn, p, seed } => {
            check(*cn == n, || format!("expected {cn} vertices, graph has {n}"))?;
            let replay = sample_gnp_edges(n, *p, *seed)?;
            for u in 0..n {
                for v in (u + 1)..n {
                    let want = replay.contains(&(u, v));
                    check(g.has_edge(u, v) == want, || {
                        format!("adjacency of {u},{v} does not replay from the seed")
                    })?;
                }
            }
            Ok(())
        }
    }
}

fn validate_split(g: &ColoredGraph, split: Option<usize>) -> Result<()> {
    let Some(s) = split else { return Ok(()) };
    let sides = g
        .sides()
        .ok_or_else(|| Error::CertificateMismatch("graph is not marked bipartite".into()))?;
    check(s <= g.n(), || "split exceeds the vertex count".into())?;
    for (v, side) in sides.iter().enumerate() {
        let want = if v < s { Side::X } else { Side::Y };
        check(*side == want, || format!("vertex {v} is on the wrong side"))?;
    }
    Ok(())
}

fn certified(g: ColoredGraph, cert: Certificate) -> Result<(ColoredGraph, Certificate)> {
    validate_certificate(&g, &cert)?;
    Ok((g, cert))
}

/// Complete multipartite graph; `parts[i]` vertices in part `i`, numbered
/// consecutively part by part.
pub fn gen_complete_r_partite(parts: &[usize]) -> Result<(ColoredGraph, Certificate)> {
    if parts.is_empty() || parts.iter().any(|&s| s == 0) {
        return Err(Error::InvalidParams("parts must be nonempty and positive".into()));
    }
    let mut groups = Vec::with_capacity(parts.len());
    let mut next = 0;
    for &size in parts {
        groups.push((next..next + size).collect::<Vec<_>>());
        next += size;
    }
    let n = next;
    let mut part_of = vec![0; n];
    for (idx, group) in groups.iter().enumerate() {
        for &v in group {
            part_of[v] = idx;
        }
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if part_of[u] != part_of[v] {
                edges.push((u, v));
            }
        }
    }
    let g = ColoredGraph::new(n, edges, [])?;
    certified(g, Certificate::CompleteRPartite { parts: groups })
}

fn chain_edges(profile: &[usize]) -> Vec<(Vertex, Vertex)> {
    let p = profile.len();
    let mut edges = Vec::new();
    for (i, &deg) in profile.iter().enumerate() {
        for j in (p - deg)..p {
            edges.push((i, p + j));
        }
    }
    edges
}

/// Chain graph from a left degree profile: `profile.len()` vertices per side,
/// left vertex `i` adjacent to the top `profile[i]` right vertices. The
/// profile must be nondecreasing (that is exactly what makes neighborhoods
/// nested) and bounded by the side size. An empty profile yields the empty
/// graph.
///
/// The staircase profile `1, 2, ..., p` produces the half-graph, whose
/// perfect matching is unique.
pub fn gen_chain(profile: &[usize]) -> Result<(ColoredGraph, Certificate)> {
    let p = profile.len();
    if profile.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParams(
            "degree profile must be nondecreasing".into(),
        ));
    }
    if profile.last().is_some_and(|&d| d > p) {
        return Err(Error::InvalidParams(
            "degree exceeds the number of right vertices".into(),
        ));
    }
    let n = 2 * p;
    let sides = (0..n).map(|v| if v < p { Side::X } else { Side::Y }).collect();
    let g = ColoredGraph::bipartite(n, sides, chain_edges(profile), [])?;
    certified(g, Certificate::Chain { profile: profile.to_vec() })
}

/// The chain instance together with the canonical shortening query that has
/// no witness: the unique perfect matching, the alternating path that zigzags
/// through all of it, and every matching edge selected in path order.
///
/// For `pairs = t` this exhibits a violation of the path-shortening property
/// with parameter `t`.
pub fn gen_chain_counterexample(pairs: usize) -> Result<(ColoredGraph, PerfectMatching, PshortQuery)> {
    if pairs == 0 {
        return Err(Error::InvalidParams("pairs must be positive".into()));
    }
    let staircase: Vec<usize> = (1..=pairs).collect();
    let (g, _) = gen_chain(&staircase)?;
    let matching: Vec<Edge> = (0..pairs).map(|i| Edge::new(i, 2 * pairs - 1 - i)).collect();
    let pm = g.perfect_matching(matching.iter().copied())?;
    let mut path = Vec::with_capacity(2 * pairs);
    for i in 0..pairs {
        path.push(i);
        path.push(2 * pairs - 1 - i);
    }
    let chosen: Vec<(Vertex, Vertex)> = (0..pairs).map(|i| (i, 2 * pairs - 1 - i)).collect();
    let query = PshortQuery {
        matching: pm.edges().to_vec(),
        path,
        chosen,
    };
    Ok((g, pm, query))
}

fn grid_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64, denom: i64) -> Rational {
    Rational::new(rng.random_range(lo * denom..=hi * denom), denom)
}

/// Random unit-interval graph: `n` unit intervals with centers on a quarter-
/// integer grid over `[0, n]`.
pub fn gen_unit_interval(n: usize, seed: u64) -> Result<(ColoredGraph, Certificate)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<Rational> = (0..n).map(|_| grid_rational(&mut rng, 0, n as i64, 4)).collect();
    let one = Rational::from_integer(1);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let gap = if centers[u] >= centers[v] {
                centers[u] - centers[v]
            } else {
                centers[v] - centers[u]
            };
            if gap <= one {
                edges.push((u, v));
            }
        }
    }
    let g = ColoredGraph::new(n, edges, [])?;
    certified(
        g,
        Certificate::UnitIntervals {
            centers,
            bipartite_split: None,
        },
    )
}

fn sample_intervals(rng: &mut ChaCha8Rng, n: usize) -> Vec<(Rational, Rational)> {
    // Left endpoints over [0, n], lengths in [1/4, n/2 + 1/4]; everything on
    // a quarter-integer grid.
    (0..n)
        .map(|_| {
            let lo = grid_rational(rng, 0, n as i64, 4);
            let len = Rational::new(rng.random_range(1..=(2 * n as i64 + 1)), 4);
            (lo, lo + len)
        })
        .collect()
}

fn intersection_edges(
    intervals: &[(Rational, Rational)],
    cross_only: Option<usize>,
) -> Vec<(Vertex, Vertex)> {
    let n = intervals.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if let Some(s) = cross_only {
                if (u < s) == (v < s) {
                    continue;
                }
            }
            let (alo, ahi) = intervals[u];
            let (blo, bhi) = intervals[v];
            if alo <= bhi && blo <= ahi {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// Random interval graph on closed rational intervals.
pub fn gen_interval(n: usize, seed: u64) -> Result<(ColoredGraph, Certificate)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let intervals = sample_intervals(&mut rng, n);
    let g = ColoredGraph::new(n, intersection_edges(&intervals, None), [])?;
    certified(
        g,
        Certificate::Intervals {
            intervals,
            bipartite_split: None,
        },
    )
}

fn bip_sides(nx: usize, ny: usize) -> Vec<Side> {
    (0..nx + ny)
        .map(|v| if v < nx { Side::X } else { Side::Y })
        .collect()
}

/// Bipartite interval graph: two interval families, adjacency only across
/// the families.
pub fn gen_bip_interval(nx: usize, ny: usize, seed: u64) -> Result<(ColoredGraph, Certificate)> {
    let n = nx + ny;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let intervals = sample_intervals(&mut rng, n);
    let g = ColoredGraph::bipartite(n, bip_sides(nx, ny), intersection_edges(&intervals, Some(nx)), [])?;
    certified(
        g,
        Certificate::Intervals {
            intervals,
            bipartite_split: Some(nx),
        },
    )
}

/// Bipartite unit-interval graph.
pub fn gen_bip_unit_interval(nx: usize, ny: usize, seed: u64) -> Result<(ColoredGraph, Certificate)> {
    let n = nx + ny;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<Rational> = (0..n).map(|_| grid_rational(&mut rng, 0, n as i64, 4)).collect();
    let one = Rational::from_integer(1);
    let mut edges = Vec::new();
    for u in 0..nx {
        for v in nx..n {
            let gap = if centers[u] >= centers[v] {
                centers[u] - centers[v]
            } else {
                centers[v] - centers[u]
            };
            if gap <= one {
                edges.push((u, v));
            }
        }
    }
    let g = ColoredGraph::bipartite(n, bip_sides(nx, ny), edges, [])?;
    certified(
        g,
        Certificate::UnitIntervals {
            centers,
            bipartite_split: Some(nx),
        },
    )
}

/// One type class of a bounded neighborhood-diversity graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypeClassSpec {
    pub size: usize,
    pub clique: bool,
}

/// Graph of neighborhood diversity at most `classes.len()`: vertices of a
/// class are twins (clique or independent set internally), classes joined
/// completely exactly for the pairs in `type_edges`.
pub fn gen_neighborhood_diversity(
    classes: &[TypeClassSpec],
    type_edges: &[(usize, usize)],
) -> Result<(ColoredGraph, Certificate)> {
    if classes.is_empty() || classes.iter().any(|c| c.size == 0) {
        return Err(Error::InvalidParams("classes must be nonempty and positive".into()));
    }
    let d = classes.len();
    for &(a, b) in type_edges {
        if a >= d || b >= d || a == b {
            return Err(Error::InvalidParams(format!("bad type edge ({a},{b})")));
        }
    }
    let mut groups = Vec::with_capacity(d);
    let mut next = 0;
    for spec in classes {
        groups.push((next..next + spec.size).collect::<Vec<_>>());
        next += spec.size;
    }
    let joined = |a: usize, b: usize| {
        type_edges
            .iter()
            .any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
    };
    let mut edges = Vec::new();
    for a in 0..d {
        if classes[a].clique {
            for i in 0..groups[a].len() {
                for j in (i + 1)..groups[a].len() {
                    edges.push((groups[a][i], groups[a][j]));
                }
            }
        }
        for b in (a + 1)..d {
            if joined(a, b) {
                for &u in &groups[a] {
                    for &v in &groups[b] {
                        edges.push((u, v));
                    }
                }
            }
        }
    }
    let g = ColoredGraph::new(next, edges, [])?;
    certified(
        g,
        Certificate::NeighborhoodDiversity {
            classes: groups,
            clique: classes.iter().map(|c| c.clique).collect(),
            type_edges: type_edges.to_vec(),
        },
    )
}

fn sample_gnp_edges(n: usize, p: Rational, seed: u64) -> Result<std::collections::BTreeSet<(Vertex, Vertex)>> {
    if p < Rational::from_integer(0) || p > Rational::from_integer(1) {
        return Err(Error::InvalidParams(format!("edge probability {p} outside [0, 1]")));
    }
    let (num, den) = (*p.numer(), *p.denom());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = std::collections::BTreeSet::new();
    for u in 0..n {
        for v in (u + 1)..n {
            // Exact Bernoulli(p): uniform draw from 0..den compared to num.
            if rng.random_range(0..den) < num {
                edges.insert((u, v));
            }
        }
    }
    Ok(edges)
}

/// Erdos-Renyi graph with exact rational edge probability.
pub fn gen_gnp(n: usize, p: Rational, seed: u64) -> Result<(ColoredGraph, Certificate)> {
    let edges = sample_gnp_edges(n, p, seed)?;
    let g = ColoredGraph::new(n, edges, [])?;
    certified(g, Certificate::Gnp { n, p, seed })
}

/// How [`random_coloring`] chooses the red set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColoringSpec {
    /// Each edge red independently with exact probability `p`.
    Bernoulli(Rational),
    /// Exactly this many red edges, chosen uniformly.
    ExactCount(usize),
}

/// Recolor a graph with a seeded random red set.
pub fn random_coloring(g: &ColoredGraph, spec: ColoringSpec, seed: u64) -> Result<ColoredGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let red: Vec<Edge> = match spec {
        ColoringSpec::Bernoulli(p) => {
            if p < Rational::from_integer(0) || p > Rational::from_integer(1) {
                return Err(Error::InvalidParams(format!("color probability {p} outside [0, 1]")));
            }
            let (num, den) = (*p.numer(), *p.denom());
            g.edges()
                .iter()
                .copied()
                .filter(|_| rng.random_range(0..den) < num)
                .collect()
        }
        ColoringSpec::ExactCount(k) => {
            if k > g.m() {
                return Err(Error::InvalidParams(format!(
                    "asked for {k} red edges, graph has only {}",
                    g.m()
                )));
            }
            let mut idx: Vec<usize> = (0..g.m()).collect();
            // Partial Fisher-Yates: the first k positions become the sample.
            for i in 0..k {
                let j = rng.random_range(i..idx.len());
                idx.swap(i, j);
            }
            idx.truncate(k);
            idx.sort_unstable();
            idx.into_iter().map(|i| g.edges()[i]).collect()
        }
    };
    g.with_red_edges(red)
}
