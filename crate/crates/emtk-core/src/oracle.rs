//! Brute-force ground truth at desk scale.
//!
//! Everything in this module enumerates perfect matchings outright. That is
//! exponential in general, so callers guard enumeration with a matching-count
//! limit and must treat `truncated` results as inconclusive. The enumeration
//! order is canonical — always match the lowest uncovered vertex, trying its
//! neighbors in ascending order — so "first found" is a deterministic,
//! reproducible choice everywhere this module is used as a reference.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::graph::{ColoredGraph, Edge, PerfectMatching};

/// Default guard on the number of perfect matchings an oracle call will
/// touch before giving up with `truncated = true`.
pub const DEFAULT_PM_LIMIT: usize = 1_000_000;

/// Visits perfect matchings in canonical order. The visitor receives the
/// edges of each matching (sorted, since the lowest uncovered vertex rule
/// emits them with strictly increasing first endpoints) and can stop the
/// enumeration early. Returns `true` if the enumeration ran to completion.
pub fn for_each_pm<F>(g: &ColoredGraph, mut f: F) -> bool
where
    F: FnMut(&[Edge]) -> ControlFlow<()>,
{
    if g.n() % 2 != 0 {
        return true;
    }
    let mut covered = vec![false; g.n()];
    let mut stack = Vec::with_capacity(g.n() / 2);
    recurse(g, &mut covered, &mut stack, &mut f).is_continue()
}

fn recurse<F>(
    g: &ColoredGraph,
    covered: &mut [bool],
    stack: &mut Vec<Edge>,
    f: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[Edge]) -> ControlFlow<()>,
{
    let Some(v) = covered.iter().position(|&c| !c) else {
        return f(stack);
    };
    covered[v] = true;
    for &w in g.neighbors(v) {
        if covered[w] {
            continue;
        }
        covered[w] = true;
        stack.push(Edge::new(v, w));
        let flow = recurse(g, covered, stack, f);
        stack.pop();
        covered[w] = false;
        flow?;
    }
    covered[v] = false;
    ControlFlow::Continue(())
}

/// Result of a guarded enumeration. When `truncated` is set, `matchings`
/// holds the first `limit` perfect matchings in canonical order and at least
/// one more exists.
#[derive(Clone, Debug)]
pub struct PmEnumeration {
    pub matchings: Vec<PerfectMatching>,
    pub truncated: bool,
}

/// Collects up to `limit` perfect matchings in canonical order.
pub fn enumerate_pms(g: &ColoredGraph, limit: usize) -> PmEnumeration {
    let mut matchings = Vec::new();
    let mut truncated = false;
    for_each_pm(g, |edges| {
        if matchings.len() == limit {
            truncated = true;
            return ControlFlow::Break(());
        }
        matchings.push(
            g.perfect_matching(edges.iter().copied())
                .expect("enumerated matchings are perfect"),
        );
        ControlFlow::Continue(())
    });
    PmEnumeration {
        matchings,
        truncated,
    }
}

/// First perfect matching in canonical order with exactly `k` red edges.
/// Unguarded full enumeration; intended for desk-scale graphs only.
pub fn brute_force_em(g: &ColoredGraph, k: usize) -> Option<PerfectMatching> {
    let mut hit = None;
    for_each_pm(g, |edges| {
        let m = g
            .perfect_matching(edges.iter().copied())
            .expect("enumerated matchings are perfect");
        if m.red_count() == k {
            hit = Some(m);
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    hit
}

/// The set of achievable red counts, with the first (canonical) perfect
/// matching realizing each count, the number of matchings enumerated, and a
/// truncation flag. A truncated landscape is a lower bound on the truth.
#[derive(Clone, Debug)]
pub struct Landscape {
    pub representatives: BTreeMap<usize, PerfectMatching>,
    pub pm_count: u64,
    pub truncated: bool,
}

impl Landscape {
    /// Achievable red counts in increasing order.
    pub fn values(&self) -> impl Iterator<Item = usize> + '_ {
        self.representatives.keys().copied()
    }

    pub fn is_achievable(&self, k: usize) -> bool {
        self.representatives.contains_key(&k)
    }

    pub fn representative(&self, k: usize) -> Option<&PerfectMatching> {
        self.representatives.get(&k)
    }

    pub fn min(&self) -> Option<usize> {
        self.values().next()
    }

    pub fn max(&self) -> Option<usize> {
        self.values().last()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// Enumerates up to `limit` perfect matchings and records which red counts
/// occur.
pub fn em_landscape(g: &ColoredGraph, limit: usize) -> Landscape {
    let mut representatives: BTreeMap<usize, PerfectMatching> = BTreeMap::new();
    let mut pm_count = 0u64;
    let mut truncated = false;
    for_each_pm(g, |edges| {
        if pm_count == limit as u64 {
            truncated = true;
            return ControlFlow::Break(());
        }
        pm_count += 1;
        let m = g
            .perfect_matching(edges.iter().copied())
            .expect("enumerated matchings are perfect");
        representatives.entry(m.red_count()).or_insert(m);
        ControlFlow::Continue(())
    });
    Landscape {
        representatives,
        pm_count,
        truncated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;

    fn complete(n: usize, red: &[(Vertex, Vertex)]) -> ColoredGraph {
        let edges = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)));
        ColoredGraph::new(n, edges, red.iter().copied()).unwrap()
    }

    fn complete_bipartite(nx: usize, ny: usize) -> ColoredGraph {
        let edges = (0..nx).flat_map(|u| (nx..nx + ny).map(move |v| (u, v)));
        ColoredGraph::new(nx + ny, edges, []).unwrap()
    }

    #[test]
    fn k4_has_three_perfect_matchings() {
        let e = enumerate_pms(&complete(4, &[]), DEFAULT_PM_LIMIT);
        assert!(!e.truncated);
        assert_eq!(e.matchings.len(), 3);
        // Canonical order: lowest uncovered vertex first, neighbors ascending.
        assert_eq!(e.matchings[0].edges(), &[Edge::new(0, 1), Edge::new(2, 3)]);
        assert_eq!(e.matchings[1].edges(), &[Edge::new(0, 2), Edge::new(1, 3)]);
        assert_eq!(e.matchings[2].edges(), &[Edge::new(0, 3), Edge::new(1, 2)]);
    }

    #[test]
    fn k33_has_six_perfect_matchings() {
        let e = enumerate_pms(&complete_bipartite(3, 3), DEFAULT_PM_LIMIT);
        assert_eq!(e.matchings.len(), 6);
        assert!(!e.truncated);
    }

    #[test]
    fn odd_and_empty_graphs_have_none() {
        assert!(enumerate_pms(&complete(5, &[]), DEFAULT_PM_LIMIT)
            .matchings
            .is_empty());
        let g = ColoredGraph::new(4, [(0, 1)], []).unwrap();
        assert!(enumerate_pms(&g, DEFAULT_PM_LIMIT).matchings.is_empty());
    }

    #[test]
    fn truncation_flags_partial_enumerations() {
        let e = enumerate_pms(&complete(8, &[]), 5);
        assert!(e.truncated);
        assert_eq!(e.matchings.len(), 5);
        // K_8 has 7!! = 105 perfect matchings.
        let full = enumerate_pms(&complete(8, &[]), DEFAULT_PM_LIMIT);
        assert!(!full.truncated);
        assert_eq!(full.matchings.len(), 105);
    }

    #[test]
    fn landscape_of_one_red_four_cycle() {
        let g = ColoredGraph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)], [(0, 1)]).unwrap();
        let l = em_landscape(&g, DEFAULT_PM_LIMIT);
        assert_eq!(l.values().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(l.pm_count, 2);
        assert!(!l.truncated);
        assert_eq!(l.representative(1).unwrap().red_count(), 1);
    }

    #[test]
    fn landscape_of_all_red_k4() {
        let g = complete(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let l = em_landscape(&g, DEFAULT_PM_LIMIT);
        assert_eq!(l.values().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn brute_force_em_finds_first_canonical_hit() {
        let g = ColoredGraph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)], [(0, 1)]).unwrap();
        let m = brute_force_em(&g, 1).unwrap();
        assert_eq!(m.edges(), &[Edge::new(0, 1), Edge::new(2, 3)]);
        assert!(brute_force_em(&g, 2).is_none());
    }

    #[test]
    fn k22_with_one_red_edge_has_objective_zero() {
        let g = ColoredGraph::new(4, [(0, 2), (0, 3), (1, 2), (1, 3)], [(0, 2)]).unwrap();
        let l = em_landscape(&g, DEFAULT_PM_LIMIT);
        assert_eq!(l.min(), Some(0));
        assert_eq!(l.values().collect::<Vec<_>>(), vec![0, 1]);
    }
}
