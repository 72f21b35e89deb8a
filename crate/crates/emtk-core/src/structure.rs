//! Path-shortening structure: witnesses, critical sets, good subpaths,
//! zero-sum extraction and weight-zero modifying sets.
//!
//! The path-shortening property `pshort(t)` of a colored graph says: for
//! every perfect matching `M`, every `M`-alternating path `P` and every
//! ordered selection of `t` matching edges `(a_1,b_1)..(a_t,b_t)` along `P`
//! (each edge traversed `a_i` before `b_i`), the graph contains a shortcut:
//! either a single edge `{a_i, b_j}` with `i < j`, or a pair of edges
//! `{a_i1, a_i3}` and `{b_i2, b_i4}` with `i1 < i2 < i3 < i4`. Graphs with
//! this property admit weight-controlled alternating-cycle modifiers, which
//! the builder at the bottom of this module assembles into zero-weight
//! modifying sets.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exec::{find_map_first, ExecMode};
use crate::graph::{
    decompose_symmetric_difference, AltKind, AlternatingStructure, ColoredGraph, Edge,
    PerfectMatching, Vertex,
};
use crate::oracle::{enumerate_pms, DEFAULT_PM_LIMIT};
use crate::{Error, Result};

/// A concrete path-shortening query: a perfect matching, an alternating path
/// in it, and an ordered selection of matching edges `(a_i, b_i)` along the
/// path. Used both to ask whether a shortening witness exists and to report
/// the exact spot where none does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PshortQuery {
    pub matching: Vec<Edge>,
    pub path: Vec<Vertex>,
    pub chosen: Vec<(Vertex, Vertex)>,
}

/// A shortcut certifying one query. Indices refer to positions in the
/// query's `chosen` list, zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PshortWitness {
    /// The edge `{a_i, b_j}` with `i < j`.
    SingleEdge { i: usize, j: usize },
    /// The edges `{a_i1, a_i3}` and `{b_i2, b_i4}` with `i1 < i2 < i3 < i4`.
    EdgePair {
        i1: usize,
        i2: usize,
        i3: usize,
        i4: usize,
    },
}

/// Validates a query against `g` and returns the path together with the edge
/// positions of the chosen matching edges.
fn validate_query(
    g: &ColoredGraph,
    query: &PshortQuery,
) -> Result<(PerfectMatching, AlternatingStructure, Vec<usize>)> {
    let pm = g.perfect_matching(query.matching.iter().copied())?;
    let path = AlternatingStructure::path(g, &pm, &query.path)?;
    if query.chosen.is_empty() {
        return Err(Error::InvalidQuery("no chosen edges".into()));
    }
    let verts = path.vertices();
    let mut positions = Vec::with_capacity(query.chosen.len());
    let mut last: Option<usize> = None;
    for &(a, b) in &query.chosen {
        let p = (0..path.len())
            .find(|&p| verts[p] == a && verts[p + 1] == b)
            .ok_or_else(|| {
                Error::InvalidQuery(format!("({a}, {b}) is not traversed a-first on the path"))
            })?;
        if !path.is_matching_edge(p) {
            return Err(Error::InvalidQuery(format!(
                "chosen edge {} is not a matching edge",
                Edge::new(a, b)
            )));
        }
        if last.is_some_and(|q| q >= p) {
            return Err(Error::InvalidQuery(
                "chosen edges out of traversal order".into(),
            ));
        }
        last = Some(p);
        positions.push(p);
    }
    Ok((pm, path, positions))
}

/// Witness search over the chosen endpoint pairs alone; adjacency is all that
/// matters. Single-edge witnesses are preferred, ties broken by smallest
/// index tuple.
fn witness_for(g: &ColoredGraph, chosen: &[(Vertex, Vertex)]) -> Option<PshortWitness> {
    let t = chosen.len();
    for i in 0..t {
        for j in i + 1..t {
            if g.has_edge(chosen[i].0, chosen[j].1) {
                return Some(PshortWitness::SingleEdge { i, j });
            }
        }
    }
    for i1 in 0..t {
        for i2 in i1 + 1..t {
            for i3 in i2 + 1..t {
                for i4 in i3 + 1..t {
                    if g.has_edge(chosen[i1].0, chosen[i3].0)
                        && g.has_edge(chosen[i2].1, chosen[i4].1)
                    {
                        return Some(PshortWitness::EdgePair { i1, i2, i3, i4 });
                    }
                }
            }
        }
    }
    None
}

/// Finds the canonical shortening witness for a validated query, or `None`
/// if the query is a genuine violation.
pub fn find_pshort_witness(g: &ColoredGraph, query: &PshortQuery) -> Result<Option<PshortWitness>> {
    validate_query(g, query)?;
    Ok(witness_for(g, &query.chosen))
}

/// How hard [`verify_pshort`] is allowed to work.
#[derive(Debug, Clone)]
pub struct PshortOptions {
    /// Selection size `t` of the property under test. At least 2; smaller
    /// selections can never have a witness.
    pub t: usize,
    /// Exhaustive verification refuses graphs larger than this.
    pub max_n: usize,
    /// Cap on the number of perfect matchings enumerated.
    pub pm_limit: usize,
    /// Random spot-checks instead of exhaustive search: `(trials, seed)`.
    pub sample: Option<(usize, u64)>,
    pub mode: ExecMode,
}

impl PshortOptions {
    pub fn exhaustive(t: usize) -> Self {
        PshortOptions {
            t,
            max_n: 12,
            pm_limit: DEFAULT_PM_LIMIT,
            sample: None,
            mode: ExecMode::default(),
        }
    }

    pub fn sampled(t: usize, trials: usize, seed: u64) -> Self {
        PshortOptions {
            sample: Some((trials, seed)),
            ..Self::exhaustive(t)
        }
    }
}

/// Outcome of a property verification run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PshortVerification {
    /// Every query has a witness; exhaustively checked.
    Holds,
    /// A concrete query with no witness.
    Violated(Box<PshortQuery>),
    /// Budget exceeded or sampling found nothing; no verdict.
    Inconclusive(String),
}

/// Checks whether `g` has the path-shortening property for selections of
/// size `t`.
///
/// Exhaustive mode enumerates perfect matchings and, for each, every ordered
/// orientation sequence of `t` matching edges. Sequences that already have a
/// witness satisfy every path realizing them, so only witness-less sequences
/// go through a realizability search over alternating paths. Sampled mode
/// spot-checks random paths and can only ever report a violation or
/// inconclusive.
pub fn verify_pshort(g: &ColoredGraph, opts: &PshortOptions) -> Result<PshortVerification> {
    if opts.t < 2 {
        return Err(Error::InvalidParams(
            "selections of size < 2 can never have a witness".into(),
        ));
    }
    if let Some((trials, seed)) = opts.sample {
        return sample_pshort(g, opts.t, trials, seed);
    }
    if g.n() > opts.max_n {
        return Ok(PshortVerification::Inconclusive(format!(
            "exhaustive verification capped at n = {}, graph has n = {}",
            opts.max_n,
            g.n()
        )));
    }
    let enumeration = enumerate_pms(g, opts.pm_limit);
    if enumeration.truncated {
        return Ok(PshortVerification::Inconclusive(format!(
            "perfect matching enumeration truncated at {}",
            opts.pm_limit
        )));
    }
    let violation = find_map_first(opts.mode, enumeration.matchings, |pm| {
        violation_for_pm(g, &pm, opts.t)
    });
    Ok(match violation {
        Some(q) => PshortVerification::Violated(Box::new(q)),
        None => PshortVerification::Holds,
    })
}

/// Oriented matching edge: traversed `entry` first, `exit` second.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Oriented {
    edge: usize,
    entry: Vertex,
    exit: Vertex,
}

fn orientations(edges: &[Edge]) -> Vec<[Oriented; 2]> {
    edges
        .iter()
        .enumerate()
        .map(|(idx, e)| {
            let (u, v) = e.endpoints();
            [
                Oriented { edge: idx, entry: u, exit: v },
                Oriented { edge: idx, entry: v, exit: u },
            ]
        })
        .collect()
}

/// First witness-less realizable selection for one perfect matching, if any.
fn violation_for_pm(g: &ColoredGraph, pm: &PerfectMatching, t: usize) -> Option<PshortQuery> {
    let medges = pm.edges();
    if medges.len() < t {
        return None;
    }
    let oriented = orientations(medges);
    let mut seq: Vec<Oriented> = Vec::with_capacity(t);
    let mut used = vec![false; medges.len()];
    select_sequences(g, pm, &oriented, t, &mut seq, &mut used)
}

fn select_sequences(
    g: &ColoredGraph,
    pm: &PerfectMatching,
    oriented: &[[Oriented; 2]],
    t: usize,
    seq: &mut Vec<Oriented>,
    used: &mut [bool],
) -> Option<PshortQuery> {
    if seq.len() == t {
        let chosen: Vec<(Vertex, Vertex)> = seq.iter().map(|o| (o.entry, o.exit)).collect();
        if witness_for(g, &chosen).is_some() {
            return None;
        }
        let path = realize(g, oriented, seq)?;
        return Some(PshortQuery {
            matching: pm.edges().to_vec(),
            path,
            chosen,
        });
    }
    for e in 0..oriented.len() {
        if used[e] {
            continue;
        }
        used[e] = true;
        for o in oriented[e] {
            seq.push(o);
            let hit = select_sequences(g, pm, oriented, t, seq, used);
            seq.pop();
            if hit.is_some() {
                used[e] = false;
                return hit;
            }
        }
        used[e] = false;
    }
    None
}

/// Searches for an alternating path visiting the waypoint sequence in order
/// and orientation. Hops between consecutive matching edges are non-matching
/// by construction (both endpoints are matched within their own edges), so a
/// waypoint order is realizable exactly when such a chain of distinct
/// matching edges exists. Intermediate edges must avoid the waypoints: a
/// path that consumes a later waypoint early realizes a different sequence.
fn realize(
    g: &ColoredGraph,
    oriented: &[[Oriented; 2]],
    waypoints: &[Oriented],
) -> Option<Vec<Vertex>> {
    let is_waypoint: Vec<bool> = {
        let mut f = vec![false; oriented.len()];
        for w in waypoints {
            f[w.edge] = true;
        }
        f
    };
    let mut used = vec![false; oriented.len()];
    used[waypoints[0].edge] = true;
    let mut trail = vec![waypoints[0]];
    if walk(g, oriented, waypoints, &is_waypoint, &mut used, &mut trail, 1) {
        let mut path = Vec::with_capacity(trail.len() * 2);
        for o in trail {
            path.push(o.entry);
            path.push(o.exit);
        }
        Some(path)
    } else {
        None
    }
}

fn walk(
    g: &ColoredGraph,
    oriented: &[[Oriented; 2]],
    waypoints: &[Oriented],
    is_waypoint: &[bool],
    used: &mut [bool],
    trail: &mut Vec<Oriented>,
    next_wp: usize,
) -> bool {
    if next_wp == waypoints.len() {
        return true;
    }
    let exit = trail.last().unwrap().exit;
    for e in 0..oriented.len() {
        if used[e] {
            continue;
        }
        for o in oriented[e] {
            if !g.has_edge(exit, o.entry) {
                continue;
            }
            let advance = if o == waypoints[next_wp] {
                1
            } else if is_waypoint[e] {
                continue;
            } else {
                0
            };
            used[e] = true;
            trail.push(o);
            if walk(g, oriented, waypoints, is_waypoint, used, trail, next_wp + advance) {
                return true;
            }
            trail.pop();
            used[e] = false;
        }
    }
    false
}

/// Random spot-checks: random perfect matchings, random maximal alternating
/// walks, random selections. Every sampled selection is realized by the walk
/// that produced it, so a missing witness is a genuine violation.
fn sample_pshort(
    g: &ColoredGraph,
    t: usize,
    trials: usize,
    seed: u64,
) -> Result<PshortVerification> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let Some(base) = crate::matching::min_red_pm(g) else {
        return Ok(PshortVerification::Inconclusive(
            "graph has no perfect matching".into(),
        ));
    };
    for _ in 0..trials {
        let pm = random_pm(g, &mut rng).unwrap_or_else(|| base.clone());
        let Some(path) = random_alternating_walk(g, &pm, &mut rng) else {
            continue;
        };
        let positions: Vec<usize> = (0..path.len())
            .filter(|&p| path.is_matching_edge(p))
            .collect();
        if positions.len() < t {
            continue;
        }
        let picked = sample_indices(&mut rng, positions.len(), t);
        let chosen: Vec<(Vertex, Vertex)> = picked
            .iter()
            .map(|&i| {
                let p = positions[i];
                (path.vertices()[p], path.vertices()[p + 1])
            })
            .collect();
        if witness_for(g, &chosen).is_none() {
            return Ok(PshortVerification::Violated(Box::new(PshortQuery {
                matching: pm.edges().to_vec(),
                path: path.vertices().to_vec(),
                chosen,
            })));
        }
    }
    Ok(PshortVerification::Inconclusive(format!(
        "{trials} sampled selections all had witnesses"
    )))
}

/// Sorted selection of `t` distinct indices out of `0..len`.
fn sample_indices(rng: &mut ChaCha8Rng, len: usize, t: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..len).collect();
    for i in 0..t {
        let j = rng.random_range(i..len);
        all.swap(i, j);
    }
    let mut picked = all[..t].to_vec();
    picked.sort_unstable();
    picked
}

/// Greedy random perfect matching: shuffled edge order, keep what fits.
/// Retries a few times; dense graphs almost always succeed.
fn random_pm(g: &ColoredGraph, rng: &mut ChaCha8Rng) -> Option<PerfectMatching> {
    for _ in 0..8 {
        let mut order: Vec<Edge> = g.edges().to_vec();
        for i in (1..order.len()).rev() {
            let j = rng.random_range(0..=i);
            order.swap(i, j);
        }
        let mut covered = vec![false; g.n()];
        let mut picked = Vec::with_capacity(g.n() / 2);
        for e in order {
            let (u, v) = e.endpoints();
            if !covered[u] && !covered[v] {
                covered[u] = true;
                covered[v] = true;
                picked.push(e);
            }
        }
        if picked.len() * 2 == g.n() {
            return g.perfect_matching(picked).ok();
        }
    }
    None
}

/// Random maximal alternating walk starting with a matching edge.
fn random_alternating_walk(
    g: &ColoredGraph,
    pm: &PerfectMatching,
    rng: &mut ChaCha8Rng,
) -> Option<AlternatingStructure> {
    if g.n() == 0 {
        return None;
    }
    let start = rng.random_range(0..g.n());
    let mut verts = vec![start, pm.partner_of(start)];
    loop {
        let cur = *verts.last().unwrap();
        let candidates: Vec<Vertex> = g
            .neighbors(cur)
            .iter()
            .copied()
            .filter(|&w| !verts.contains(&w) && !verts.contains(&pm.partner_of(w)))
            .collect();
        if candidates.is_empty() {
            break;
        }
        let next = candidates[rng.random_range(0..candidates.len())];
        verts.push(next);
        verts.push(pm.partner_of(next));
    }
    AlternatingStructure::path(g, pm, &verts).ok()
}

/// Positions of `t` red matching edges along a path whose prefix sums at the
/// edge starts are non-increasing. Spans between such edges then weigh at
/// most -1, which is what makes extracted modifiers non-positive.
///
/// Three constructions are tried in turn: new minima of the prefix sums from
/// the start, new minima after the first maximum, and a pigeonhole bucket of
/// equal prefix values. For a path with total weight at most 0 and at least
/// `4t^2` red edges one of them always succeeds.
pub fn find_critical_set(path: &AlternatingStructure, t: usize) -> Option<Vec<usize>> {
    if t == 0 {
        return Some(Vec::new());
    }
    let s = path.prefix_sums();
    let descents = |from: usize| -> Vec<usize> {
        let mut out = Vec::new();
        let mut floor = s[from];
        for p in from..path.len() {
            if s[p + 1] < floor {
                debug_assert_eq!(path.edge_weight(p), -1, "prefix sums fall on red matching edges");
                out.push(p);
                floor = s[p + 1];
                if out.len() == t {
                    break;
                }
            }
        }
        out
    };
    let from_start = descents(0);
    if from_start.len() == t {
        return Some(from_start);
    }
    let peak = (0..s.len()).max_by_key(|&i| (s[i], std::cmp::Reverse(i)))?;
    let after_peak = descents(peak);
    if after_peak.len() == t {
        return Some(after_peak);
    }
    let mut buckets: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for p in 0..path.len() {
        if path.is_matching_edge(p) && path.edge_weight(p) == -1 {
            buckets.entry(s[p]).or_default().push(p);
        }
    }
    buckets
        .into_values()
        .find(|b| b.len() >= t)
        .map(|b| b[..t].to_vec())
}

/// An alternating cycle used to shift a matching's red count by a known
/// amount: `r(M △ C) = r(M) + w` for a cycle of weight `w` alternating in
/// `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modifier {
    /// Cycle traversal; the closing edge returns to the first vertex.
    pub vertices: Vec<Vertex>,
    /// Induced weight of the cycle.
    pub weight: i64,
}

impl Modifier {
    fn from_structure(c: &AlternatingStructure) -> Self {
        debug_assert_eq!(c.kind(), AltKind::Cycle);
        Modifier {
            vertices: c.vertices().to_vec(),
            weight: c.weight(),
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Builds the non-positive modifier for a critical set and its witness.
///
/// A single-edge witness `(i, j)` closes the subpath from the start of
/// critical edge `i` to the end of critical edge `j` into a cycle. A pair
/// witness splices the spans `i1..i2` and `i3..i4`, traversing the second
/// backwards. Non-increasing prefix sums at the critical edges bound every
/// span at -1, so the cycle weight is at most 0 even after adding chords.
pub fn extract_modifier(
    g: &ColoredGraph,
    m: &PerfectMatching,
    path: &AlternatingStructure,
    critical: &[usize],
    witness: PshortWitness,
) -> Result<Modifier> {
    let verts = path.vertices();
    let cycle_verts: Vec<Vertex> = match witness {
        PshortWitness::SingleEdge { i, j } => {
            if i >= j || j >= critical.len() {
                return Err(Error::InvalidQuery("witness indices out of range".into()));
            }
            verts[critical[i]..=critical[j] + 1].to_vec()
        }
        PshortWitness::EdgePair { i1, i2, i3, i4 } => {
            if !(i1 < i2 && i2 < i3 && i3 < i4) || i4 >= critical.len() {
                return Err(Error::InvalidQuery("witness indices out of range".into()));
            }
            let mut v = verts[critical[i1]..=critical[i2] + 1].to_vec();
            v.extend(verts[critical[i3]..=critical[i4] + 1].iter().rev());
            v
        }
    };
    let cycle = AlternatingStructure::cycle(g, m, &cycle_verts)?;
    Ok(Modifier::from_structure(&cycle))
}

/// Mirror of [`extract_modifier`] producing a non-negative modifier: the
/// whole construction runs on the inverted coloring, where it yields weight
/// at most 0, and alternating cycle weights negate exactly under inversion.
///
/// `critical` must be a critical set of the inverted path (blue matching
/// edges with non-increasing inverted prefix sums); use
/// [`dual_path`] and [`find_critical_set`] to obtain one.
pub fn extract_dual_modifier(
    g: &ColoredGraph,
    m: &PerfectMatching,
    path: &AlternatingStructure,
    critical: &[usize],
    witness: PshortWitness,
) -> Result<Modifier> {
    let (inv, inv_m, inv_path) = invert_instance(g, m, path)?;
    let inner = extract_modifier(&inv, &inv_m, &inv_path, critical, witness)?;
    Ok(Modifier {
        vertices: inner.vertices,
        weight: -inner.weight,
    })
}

/// The same traversal re-weighted under the inverted coloring. Positions are
/// preserved, so critical sets found on the result index into the original
/// path as well.
pub fn dual_path(
    g: &ColoredGraph,
    m: &PerfectMatching,
    path: &AlternatingStructure,
) -> Result<AlternatingStructure> {
    let (_, _, inv_path) = invert_instance(g, m, path)?;
    Ok(inv_path)
}

fn invert_instance(
    g: &ColoredGraph,
    m: &PerfectMatching,
    path: &AlternatingStructure,
) -> Result<(ColoredGraph, PerfectMatching, AlternatingStructure)> {
    let inv = g.invert_coloring();
    let inv_m = inv.perfect_matching(m.edges().iter().copied())?;
    let inv_path = AlternatingStructure::path(&inv, &inv_m, path.vertices())?;
    Ok((inv, inv_m, inv_path))
}

/// Applies one modifier: `M △ C`. Validates that the cycle alternates in `m`
/// and that its recorded weight matches before toggling.
pub fn apply_modifier(
    g: &ColoredGraph,
    m: &PerfectMatching,
    modifier: &Modifier,
) -> Result<PerfectMatching> {
    apply_modifying_set(
        g,
        m,
        &ModifyingSet {
            modifiers: vec![modifier.clone()],
        },
    )
}

/// Pairwise vertex-disjoint alternating cycles applied together. A set of
/// total weight 0 moves a matching without changing its red count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModifyingSet {
    pub modifiers: Vec<Modifier>,
}

impl ModifyingSet {
    pub fn total_weight(&self) -> i64 {
        self.modifiers.iter().map(|c| c.weight).sum()
    }
}

/// Applies every cycle of the set at once. All cycles are validated against
/// the original matching; disjointness keeps them independently alternating.
pub fn apply_modifying_set(
    g: &ColoredGraph,
    m: &PerfectMatching,
    set: &ModifyingSet,
) -> Result<PerfectMatching> {
    let mut seen = vec![false; g.n()];
    for modifier in &set.modifiers {
        let cycle = AlternatingStructure::cycle(g, m, &modifier.vertices)?;
        if cycle.weight() != modifier.weight {
            return Err(Error::InvalidStructure(format!(
                "modifier weight {} does not match the cycle's weight {}",
                modifier.weight,
                cycle.weight()
            )));
        }
        for &v in modifier.vertices.iter() {
            if seen[v] {
                return Err(Error::InvalidStructure(format!(
                    "modifiers are not vertex-disjoint at {v}"
                )));
            }
            seen[v] = true;
        }
    }
    let mut edges = m.edge_set();
    for modifier in &set.modifiers {
        let cycle = AlternatingStructure::cycle(g, m, &modifier.vertices)?;
        for &e in cycle.edges() {
            if !edges.remove(&e) {
                edges.insert(e);
            }
        }
    }
    let next = g.perfect_matching(edges)?;
    debug_assert_eq!(
        next.red_count() as i64,
        m.red_count() as i64 + set.total_weight()
    );
    Ok(next)
}

/// Which side a good subpath serves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoodKind {
    /// Even length, weight at most 0, at least `t` red edges.
    Primal,
    /// Even length, weight at least 0, at least `t` blue edges.
    Dual,
}

/// Finds an even-length subpath suitable for modifier extraction.
///
/// Construction order mirrors the existence proof: a deeply negative path is
/// itself good after trimming one edge (dually for deeply positive), a path
/// with an extreme prefix peak splits at the peak, and a path that stays in
/// a narrow band around 0 contains a good block among any partition into
/// red-heavy arcs. An ordered scan over all even subpaths backs the cases
/// up, so `None` means no good subpath exists at all.
pub fn find_good_subpath(
    path: &AlternatingStructure,
    t: usize,
    kind: GoodKind,
) -> Option<AlternatingStructure> {
    let good = |sub: &AlternatingStructure| -> bool {
        sub.len() % 2 == 0
            && match kind {
                GoodKind::Primal => sub.weight() <= 0 && sub.red_count() >= t,
                GoodKind::Dual => sub.weight() >= 0 && sub.blue_count() >= t,
            }
    };
    let l = path.len();
    let s = path.prefix_sums();
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    // Whole path, with one-edge trims repairing parity.
    candidates.push((0, l - 1));
    if l >= 2 {
        candidates.push((1, l - 1));
        candidates.push((0, l - 2));
    }
    // Splits at the extreme prefix values, again with trims.
    for anchor in [
        (0..=l).max_by_key(|&i| (s[i], std::cmp::Reverse(i))),
        (0..=l).min_by_key(|&i| (s[i], std::cmp::Reverse(i))),
    ]
    .into_iter()
    .flatten()
    {
        if anchor >= 1 {
            candidates.push((0, anchor - 1));
            if anchor >= 2 {
                candidates.push((1, anchor - 1));
                candidates.push((0, anchor - 2));
            }
        }
        if anchor < l {
            candidates.push((anchor, l - 1));
            candidates.push((anchor + 1, l - 1));
            if anchor + 1 < l {
                candidates.push((anchor, l - 2));
            }
        }
    }
    for (i, j) in candidates {
        if i <= j && j < l {
            let sub = path.subpath(i, j);
            if good(&sub) {
                return Some(sub);
            }
        }
    }
    // Exhaustive fallback in (start, end) order.
    for i in 0..l {
        for j in (i + 1..l).step_by(2) {
            let sub = path.subpath(i, j);
            if good(&sub) {
                return Some(sub);
            }
        }
    }
    None
}

/// Nonempty subset of `values` summing to zero, as sorted indices.
///
/// When the sequence is long enough and balanced (length at least `2p + 2`,
/// entries in `[-p, p]`, at least `p + 1` non-negative and `p + 1`
/// non-positive entries) the merge walk below is guaranteed to find one:
/// interleaving entries by the sign of the running sum keeps all prefix sums
/// within a window of `2p` values, so two of the first `2p + 2` prefixes
/// collide and the stretch between them sums to zero. An exact subset-sum
/// sweep backs the walk up, so `None` means no zero-sum subset exists.
pub fn zero_sum_subsequence(values: &[i64], p: i64) -> Option<Vec<usize>> {
    if let Some(i) = values.iter().position(|&v| v == 0) {
        return Some(vec![i]);
    }
    let pos: Vec<usize> = (0..values.len()).filter(|&i| values[i] > 0).collect();
    let neg: Vec<usize> = (0..values.len()).filter(|&i| values[i] < 0).collect();
    let bounded = values.iter().all(|&v| v.abs() <= p);
    if bounded && pos.len() as i64 >= p + 1 && neg.len() as i64 >= p + 1 {
        let mut order = Vec::with_capacity(values.len());
        let (mut pi, mut ni) = (0, 0);
        let mut sum = 0;
        while pi < pos.len() || ni < neg.len() {
            let idx = if (sum > 0 && ni < neg.len()) || pi == pos.len() {
                let i = neg[ni];
                ni += 1;
                i
            } else {
                let i = pos[pi];
                pi += 1;
                i
            };
            sum += values[idx];
            order.push(idx);
        }
        let mut seen: BTreeMap<i64, usize> = BTreeMap::new();
        seen.insert(0, 0);
        let mut prefix = 0;
        for (k, &idx) in order.iter().enumerate() {
            prefix += values[idx];
            if let Some(&start) = seen.get(&prefix) {
                let mut picked: Vec<usize> = order[start..=k].to_vec();
                picked.sort_unstable();
                debug_assert_eq!(picked.iter().map(|&i| values[i]).sum::<i64>(), 0);
                return Some(picked);
            }
            seen.insert(prefix, k + 1);
        }
    }
    // Exact fallback: subset-sum over all entries, first-reached parents.
    let mut parents: BTreeMap<i64, (usize, i64)> = BTreeMap::new();
    for (i, &v) in values.iter().enumerate() {
        let mut additions: Vec<(i64, (usize, i64))> = Vec::new();
        if !parents.contains_key(&v) {
            additions.push((v, (i, 0)));
        }
        for (&sum, _) in &parents {
            let next = sum + v;
            if next != 0 && parents.contains_key(&next) {
                continue;
            }
            additions.push((next, (i, sum)));
        }
        for (sum, parent) in additions {
            if sum == 0 {
                let mut picked = vec![parent.0];
                let mut cur = parent.1;
                while cur != 0 {
                    let (j, prev) = parents[&cur];
                    picked.push(j);
                    cur = prev;
                }
                picked.sort_unstable();
                debug_assert_eq!(picked.iter().map(|&i| values[i]).sum::<i64>(), 0);
                return Some(picked);
            }
            parents.entry(sum).or_insert(parent);
        }
    }
    None
}

/// Tries to build a nonempty zero-weight modifying set inside `m △ m_other`.
///
/// With `tau = 4t^2`: a zero-weight difference cycle is returned alone;
/// cycles of weight within `2 tau` join the candidate pool whole; heavier
/// cycles are cut into arcs at every `2 tau` of accumulated weight
/// (one-edge gaps keep the pieces disjoint) and each arc is reduced to a
/// modifier of weight in `[-2t - 2, 0]` or `[0, 2t + 2]` via a critical set
/// and its shortening witness. A zero-sum subset of the pool's weights forms
/// the result. Returns `Ok(None)` when no zero-sum combination exists;
/// witness extraction failures report the graph as lacking the shortening
/// property.
pub fn build_zero_weight_modifying_set(
    g: &ColoredGraph,
    m: &PerfectMatching,
    m_other: &PerfectMatching,
    t: usize,
) -> Result<Option<ModifyingSet>> {
    if t < 2 {
        return Err(Error::InvalidParams(
            "shortening parameter must be at least 2".into(),
        ));
    }
    let tau = 4 * (t as i64) * (t as i64);
    let diff = decompose_symmetric_difference(g, m, m_other)?;
    for c in &diff.cycles {
        if c.weight() == 0 {
            return Ok(Some(ModifyingSet {
                modifiers: vec![Modifier::from_structure(c)],
            }));
        }
    }
    let mut pool: Vec<Modifier> = Vec::new();
    for c in &diff.cycles {
        if c.weight().abs() <= 2 * tau {
            pool.push(Modifier::from_structure(c));
            continue;
        }
        let mut start = 0;
        let mut len = 0;
        let mut acc = 0i64;
        let mut pos = 0;
        while pos < c.len() {
            acc += c.edge_weight(pos);
            len += 1;
            if acc.abs() >= 2 * tau {
                pool.push(harvest_arc(g, m, &c.arc(start, len), t)?);
                pos += 1;
                start = pos + 1;
                len = 0;
                acc = 0;
            }
            pos += 1;
        }
    }
    let weights: Vec<i64> = pool.iter().map(|c| c.weight).collect();
    match zero_sum_subsequence(&weights, 2 * tau) {
        Some(picked) => Ok(Some(ModifyingSet {
            modifiers: picked.into_iter().map(|i| pool[i].clone()).collect(),
        })),
        None => Ok(None),
    }
}

/// Reduces one heavy arc to a small-weight modifier. Negative arcs run the
/// primal critical-set construction directly; positive arcs run it on the
/// inverted coloring.
fn harvest_arc(
    g: &ColoredGraph,
    m: &PerfectMatching,
    arc: &AlternatingStructure,
    t: usize,
) -> Result<Modifier> {
    let primal = arc.weight() < 0;
    let working = if primal {
        arc.clone()
    } else {
        dual_path(g, m, arc)?
    };
    let critical = find_critical_set(&working, t).ok_or_else(|| {
        Error::InvalidStructure("arc weight promised a critical set".into())
    })?;
    let chosen: Vec<(Vertex, Vertex)> = critical
        .iter()
        .map(|&p| (arc.vertices()[p], arc.vertices()[p + 1]))
        .collect();
    let witness = witness_for(g, &chosen).ok_or_else(|| {
        Error::MissingWitness(Box::new(PshortQuery {
            matching: m.edges().to_vec(),
            path: arc.vertices().to_vec(),
            chosen,
        }))
    })?;
    if primal {
        extract_modifier(g, m, arc, &critical, witness)
    } else {
        extract_dual_modifier(g, m, arc, &critical, witness)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{
        gen_chain_counterexample, gen_complete_r_partite, random_coloring, ColoringSpec,
    };
    use crate::graph::Color;
    use crate::matching::min_red_pm;
    use crate::oracle::for_each_pm;
    use std::ops::ControlFlow;

    fn complete_colored(n: usize, seed: u64) -> ColoredGraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        let g = ColoredGraph::new(n, edges, std::iter::empty()).unwrap();
        random_coloring(&g, ColoringSpec::Bernoulli(crate::Rational::new(1, 2)), seed).unwrap()
    }

    /// Path graph host: the graph is exactly the path, colors prescribed,
    /// matching alternates starting with the first edge.
    fn path_instance(colors: &[Color]) -> (ColoredGraph, PerfectMatching, AlternatingStructure) {
        let n = colors.len() + 1;
        assert_eq!(n % 2, 0, "even vertex count needed for a perfect matching");
        let edges: Vec<(usize, usize)> = (0..colors.len()).map(|i| (i, i + 1)).collect();
        let red: Vec<(usize, usize)> = edges
            .iter()
            .zip(colors)
            .filter(|(_, c)| **c == Color::Red)
            .map(|(e, _)| *e)
            .collect();
        let g = ColoredGraph::new(n, edges, red).unwrap();
        let pm = g
            .perfect_matching((0..n / 2).map(|i| Edge::new(2 * i, 2 * i + 1)))
            .unwrap();
        let path = AlternatingStructure::path(&g, &pm, &(0..n).collect::<Vec<_>>()).unwrap();
        (g, pm, path)
    }

    fn random_colors(rng: &mut ChaCha8Rng, len: usize) -> Vec<Color> {
        (0..len)
            .map(|_| if rng.random_bool(0.5) { Color::Red } else { Color::Blue })
            .collect()
    }

    /// Brute-force property check: every alternating path of every perfect
    /// matching, every ordered selection of `t` matching edges.
    fn brute_pshort(g: &ColoredGraph, t: usize) -> Option<PshortQuery> {
        let mut hit = None;
        for_each_pm(g, |edges| {
            let pm = g.perfect_matching(edges.iter().copied()).unwrap();
            let mut stack: Vec<Vec<Vertex>> = (0..g.n())
                .map(|v| vec![v, pm.partner_of(v)])
                .collect();
            while let Some(verts) = stack.pop() {
                if let Some(q) = violating_selection(g, &pm, &verts, t) {
                    hit = Some(q);
                    return ControlFlow::Break(());
                }
                let cur = *verts.last().unwrap();
                for &w in g.neighbors(cur) {
                    if !verts.contains(&w) && !verts.contains(&pm.partner_of(w)) {
                        let mut next = verts.clone();
                        next.push(w);
                        next.push(pm.partner_of(w));
                        stack.push(next);
                    }
                }
            }
            ControlFlow::Continue(())
        });
        hit
    }

    fn violating_selection(
        g: &ColoredGraph,
        pm: &PerfectMatching,
        verts: &[Vertex],
        t: usize,
    ) -> Option<PshortQuery> {
        let pairs: Vec<(Vertex, Vertex)> = verts.chunks(2).map(|c| (c[0], c[1])).collect();
        if pairs.len() < t {
            return None;
        }
        let mut picked = vec![0usize; t];
        fn rec(
            g: &ColoredGraph,
            pairs: &[(Vertex, Vertex)],
            picked: &mut [usize],
            depth: usize,
            from: usize,
        ) -> Option<Vec<(Vertex, Vertex)>> {
            if depth == picked.len() {
                let chosen: Vec<_> = picked.iter().map(|&i| pairs[i]).collect();
                return if witness_for(g, &chosen).is_none() {
                    Some(chosen)
                } else {
                    None
                };
            }
            for i in from..pairs.len() {
                picked[depth] = i;
                if let Some(c) = rec(g, pairs, picked, depth + 1, i + 1) {
                    return Some(c);
                }
            }
            None
        }
        rec(g, &pairs, &mut picked, 0, 0).map(|chosen| PshortQuery {
            matching: pm.edges().to_vec(),
            path: verts.to_vec(),
            chosen,
        })
    }

    #[test]
    fn witness_prefers_single_edges_and_smallest_indices() {
        // Complete graph: the (0, 1) single edge always exists.
        let g = complete_colored(8, 1);
        let pm = min_red_pm(&g).unwrap();
        let verts: Vec<Vertex> = {
            let mut v = Vec::new();
            for e in pm.edges() {
                v.push(e.endpoints().0);
                v.push(e.endpoints().1);
            }
            v
        };
        let path = AlternatingStructure::path(&g, &pm, &verts);
        // Complete-graph traversal in matching order is alternating only if
        // consecutive connector edges are non-matching, which holds here
        // because matched pairs are contiguous chunks.
        let path = path.unwrap();
        let query = PshortQuery {
            matching: pm.edges().to_vec(),
            path: path.vertices().to_vec(),
            chosen: verts.chunks(2).map(|c| (c[0], c[1])).collect(),
        };
        let w = find_pshort_witness(&g, &query).unwrap();
        assert_eq!(w, Some(PshortWitness::SingleEdge { i: 0, j: 1 }));
    }

    #[test]
    fn malformed_queries_are_rejected() {
        let g = complete_colored(6, 2);
        let pm = min_red_pm(&g).unwrap();
        let e0 = pm.edges()[0];
        let e1 = pm.edges()[1];
        let good_path = vec![
            e0.endpoints().0,
            e0.endpoints().1,
            e1.endpoints().0,
            e1.endpoints().1,
        ];
        // Chosen edge traversed b-first.
        let q = PshortQuery {
            matching: pm.edges().to_vec(),
            path: good_path.clone(),
            chosen: vec![(e0.endpoints().1, e0.endpoints().0)],
        };
        assert!(matches!(
            find_pshort_witness(&g, &q),
            Err(Error::InvalidQuery(_))
        ));
        // Chosen edges out of order.
        let q = PshortQuery {
            matching: pm.edges().to_vec(),
            path: good_path,
            chosen: vec![
                (e1.endpoints().0, e1.endpoints().1),
                (e0.endpoints().0, e0.endpoints().1),
            ],
        };
        assert!(matches!(
            find_pshort_witness(&g, &q),
            Err(Error::InvalidQuery(_))
        ));
    }

    #[test]
    fn chain_counterexample_query_has_no_witness() {
        for pairs in 2..=6 {
            let (g, _, query) = gen_chain_counterexample(pairs).unwrap();
            assert_eq!(find_pshort_witness(&g, &query).unwrap(), None);
        }
    }

    #[test]
    fn verify_matches_brute_force_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut violated = 0;
        for trial in 0u64..60 {
            let n = if trial % 2 == 0 { 6 } else { 8 };
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.55) {
                        edges.push((u, v));
                    }
                }
            }
            let g = ColoredGraph::new(n, edges, std::iter::empty()).unwrap();
            let g = random_coloring(&g, ColoringSpec::Bernoulli(crate::Rational::new(1, 2)), trial)
                .unwrap();
            for t in [2, 3] {
                let verdict = verify_pshort(&g, &PshortOptions::exhaustive(t)).unwrap();
                let brute = brute_pshort(&g, t);
                match verdict {
                    PshortVerification::Holds => assert!(
                        brute.is_none(),
                        "trial {trial} t{t}: verifier says holds, brute found {brute:?}"
                    ),
                    PshortVerification::Violated(q) => {
                        violated += 1;
                        assert!(brute.is_some(), "trial {trial} t{t}: spurious violation");
                        assert_eq!(find_pshort_witness(&g, &q).unwrap(), None);
                    }
                    PshortVerification::Inconclusive(r) => panic!("unexpected: {r}"),
                }
            }
        }
        assert!(violated > 0, "sweep never exercised the violation path");
    }

    #[test]
    fn complete_multipartite_satisfies_pshort_three() {
        for parts in [vec![2, 2, 2], vec![3, 3], vec![4, 2], vec![2, 2, 2, 2]] {
            let (g, _) = gen_complete_r_partite(&parts).unwrap();
            let g = random_coloring(&g, ColoringSpec::Bernoulli(crate::Rational::new(1, 3)), 5)
                .unwrap();
            let verdict = verify_pshort(&g, &PshortOptions::exhaustive(3)).unwrap();
            assert_eq!(verdict, PshortVerification::Holds, "parts {parts:?}");
        }
    }

    #[test]
    fn chain_violates_pshort_at_its_pair_count() {
        for pairs in [2, 3, 4] {
            let (g, _, _) = gen_chain_counterexample(pairs).unwrap();
            match verify_pshort(&g, &PshortOptions::exhaustive(pairs)).unwrap() {
                PshortVerification::Violated(q) => {
                    assert_eq!(find_pshort_witness(&g, &q).unwrap(), None);
                }
                other => panic!("chain({pairs}) reported {other:?}"),
            }
        }
    }

    #[test]
    fn sampling_finds_the_chain_violation() {
        let (g, _, _) = gen_chain_counterexample(4).unwrap();
        match verify_pshort(&g, &PshortOptions::sampled(4, 400, 9)).unwrap() {
            PshortVerification::Violated(q) => {
                assert_eq!(find_pshort_witness(&g, &q).unwrap(), None);
            }
            other => panic!("sampling reported {other:?}"),
        }
    }

    #[test]
    fn oversized_graphs_report_inconclusive() {
        let g = complete_colored(14, 3);
        let verdict = verify_pshort(
            &g,
            &PshortOptions {
                max_n: 12,
                ..PshortOptions::exhaustive(3)
            },
        )
        .unwrap();
        assert!(matches!(verdict, PshortVerification::Inconclusive(_)));
    }

    fn assert_critical(path: &AlternatingStructure, positions: &[usize], t: usize) {
        assert_eq!(positions.len(), t);
        let s = path.prefix_sums();
        for w in positions.windows(2) {
            assert!(w[0] < w[1], "positions must increase");
            assert!(s[w[0]] >= s[w[1]], "starts must be non-increasing");
        }
        for &p in positions {
            assert!(path.is_matching_edge(p) && path.edge_weight(p) == -1);
        }
    }

    #[test]
    fn critical_sets_exist_when_promised() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut found = 0;
        for _ in 0..300 {
            let len = 2 * rng.random_range(2..14) + 1;
            let colors = random_colors(&mut rng, len);
            let (_, _, path) = path_instance(&colors);
            for t in [1, 2, 3] {
                if let Some(positions) = find_critical_set(&path, t) {
                    assert_critical(&path, &positions, t);
                    found += 1;
                } else {
                    let red_matching = (0..path.len())
                        .filter(|&p| path.edge_weight(p) == -1)
                        .count();
                    assert!(
                        path.weight() > 0 || red_matching < 2 * t * t,
                        "promise broken: w={} reds={}",
                        path.weight(),
                        red_matching
                    );
                }
            }
        }
        assert!(found > 100);
    }

    #[test]
    fn all_red_path_yields_deep_critical_set() {
        // Alternating all-red path: matching edges weigh -1, connectors +1.
        let (_, _, path) = path_instance(&[Color::Red; 19]);
        let positions = find_critical_set(&path, 3).unwrap();
        assert_critical(&path, &positions, 3);
    }

    #[test]
    fn extraction_laws_hold_on_dense_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut extracted = 0;
        for trial in 0u64..200 {
            let g = complete_colored(10, 1000 + trial);
            // Random matchings carry red matching edges; the minimum-red one
            // rarely does, and critical sets need them.
            let pm = random_pm(&g, &mut rng).unwrap();
            let Some(path) = random_alternating_walk(&g, &pm, &mut rng) else {
                continue;
            };
            for t in [2, 3] {
                let Some(critical) = find_critical_set(&path, t) else {
                    continue;
                };
                let chosen: Vec<(Vertex, Vertex)> = critical
                    .iter()
                    .map(|&p| (path.vertices()[p], path.vertices()[p + 1]))
                    .collect();
                let Some(witness) = witness_for(&g, &chosen) else {
                    continue;
                };
                let modifier = extract_modifier(&g, &pm, &path, &critical, witness).unwrap();
                assert!(modifier.weight <= 0, "primal modifiers are non-positive");
                let moved = apply_modifier(&g, &pm, &modifier).unwrap();
                assert_eq!(
                    moved.red_count() as i64,
                    pm.red_count() as i64 + modifier.weight
                );
                assert_eq!(
                    crate::graph::decompose_symmetric_difference(&g, &pm, &moved)
                        .unwrap()
                        .edge_count(),
                    modifier.len()
                );
                extracted += 1;
            }
        }
        assert!(extracted > 50, "only {extracted} extractions exercised");
    }

    #[test]
    fn dual_extraction_mirrors_primal() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut extracted = 0;
        for trial in 0u64..200 {
            let g = complete_colored(10, 2000 + trial);
            let pm = min_red_pm(&g).unwrap();
            let Some(path) = random_alternating_walk(&g, &pm, &mut rng) else {
                continue;
            };
            let inverted = dual_path(&g, &pm, &path).unwrap();
            let Some(critical) = find_critical_set(&inverted, 2) else {
                continue;
            };
            let chosen: Vec<(Vertex, Vertex)> = critical
                .iter()
                .map(|&p| (path.vertices()[p], path.vertices()[p + 1]))
                .collect();
            let Some(witness) = witness_for(&g, &chosen) else {
                continue;
            };
            let modifier = extract_dual_modifier(&g, &pm, &path, &critical, witness).unwrap();
            assert!(modifier.weight >= 0, "dual modifiers are non-negative");
            let moved = apply_modifier(&g, &pm, &modifier).unwrap();
            assert_eq!(
                moved.red_count() as i64,
                pm.red_count() as i64 + modifier.weight
            );
            extracted += 1;
        }
        assert!(extracted > 50, "only {extracted} dual extractions exercised");
    }

    #[test]
    fn good_subpaths_match_brute_force_existence() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..400 {
            let len = rng.random_range(3..16) | 1;
            let colors = random_colors(&mut rng, len);
            let (_, _, path) = path_instance(&colors);
            for t in [1, 2, 3] {
                for kind in [GoodKind::Primal, GoodKind::Dual] {
                    let found = find_good_subpath(&path, t, kind);
                    let exists = (0..path.len()).any(|i| {
                        (i + 1..path.len()).step_by(2).any(|j| {
                            let sub = path.subpath(i, j);
                            match kind {
                                GoodKind::Primal => sub.weight() <= 0 && sub.red_count() >= t,
                                GoodKind::Dual => sub.weight() >= 0 && sub.blue_count() >= t,
                            }
                        })
                    });
                    match found {
                        Some(sub) => {
                            assert!(exists);
                            assert_eq!(sub.len() % 2, 0);
                            match kind {
                                GoodKind::Primal => {
                                    assert!(sub.weight() <= 0 && sub.red_count() >= t)
                                }
                                GoodKind::Dual => {
                                    assert!(sub.weight() >= 0 && sub.blue_count() >= t)
                                }
                            }
                        }
                        None => assert!(!exists),
                    }
                }
            }
        }
    }

    #[test]
    fn deeply_weighted_paths_always_have_good_subpaths() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..200 {
            let len = rng.random_range(3..16) | 1;
            let colors = random_colors(&mut rng, len);
            let (_, _, path) = path_instance(&colors);
            for t in [1, 2] {
                if path.weight() <= -2 * (t as i64) {
                    assert!(find_good_subpath(&path, t, GoodKind::Primal).is_some());
                }
                if path.weight() >= 2 * (t as i64) {
                    assert!(find_good_subpath(&path, t, GoodKind::Dual).is_some());
                }
            }
        }
    }

    fn assert_zero_sum(values: &[i64], picked: &[usize]) {
        assert!(!picked.is_empty());
        assert!(picked.windows(2).all(|w| w[0] < w[1]));
        assert!(picked.iter().all(|&i| i < values.len()));
        assert_eq!(picked.iter().map(|&i| values[i]).sum::<i64>(), 0);
    }

    #[test]
    fn zero_sum_walk_succeeds_under_the_hypothesis() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for p in 1i64..=4 {
            for _ in 0..400 {
                let len = 2 * p + 2 + rng.random_range(0..4);
                let mut values = Vec::new();
                for _ in 0..(p + 1) {
                    values.push(rng.random_range(1..=p));
                    values.push(-rng.random_range(1..=p));
                }
                for _ in (2 * p + 2)..len {
                    values.push(rng.random_range(-p..=p));
                }
                let picked = zero_sum_subsequence(&values, p).expect("hypothesis guarantees one");
                assert_zero_sum(&values, &picked);
            }
        }
    }

    #[test]
    fn zero_sum_fallback_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        for _ in 0..500 {
            let len = rng.random_range(1..10);
            let values: Vec<i64> = (0..len).map(|_| rng.random_range(-5..=5)).collect();
            let brute = (1u32..(1 << len)).any(|mask| {
                (0..len)
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| values[i])
                    .sum::<i64>()
                    == 0
            });
            match zero_sum_subsequence(&values, 5) {
                Some(picked) => {
                    assert!(brute);
                    assert_zero_sum(&values, &picked);
                }
                None => assert!(!brute, "missed a zero-sum subset in {values:?}"),
            }
        }
    }

    #[test]
    fn zero_weight_cycle_shortcut_fires() {
        // K6 with one red edge per matching: swapping two matched pairs along
        // a blue cycle keeps the red count.
        let mut edges = Vec::new();
        for u in 0..6 {
            for v in u + 1..6 {
                edges.push((u, v));
            }
        }
        let g = ColoredGraph::new(6, edges, [(0, 1)]).unwrap();
        let m1 = g
            .perfect_matching([Edge::new(0, 1), Edge::new(2, 3), Edge::new(4, 5)])
            .unwrap();
        let m2 = g
            .perfect_matching([Edge::new(0, 1), Edge::new(2, 4), Edge::new(3, 5)])
            .unwrap();
        let set = build_zero_weight_modifying_set(&g, &m1, &m2, 2)
            .unwrap()
            .expect("zero-weight difference cycle");
        assert_eq!(set.modifiers.len(), 1);
        assert_eq!(set.total_weight(), 0);
        let moved = apply_modifying_set(&g, &m1, &set).unwrap();
        assert_eq!(moved.red_count(), m1.red_count());
        assert_eq!(moved, m2);
    }

    #[test]
    fn equal_red_pairs_always_yield_a_set() {
        // Matchings with equal red counts: the whole difference sums to
        // zero, so a zero-sum subset of the candidate pool always exists.
        let mut checked = 0;
        for trial in 0u64..25 {
            let g = complete_colored(8, 3000 + trial);
            let pms = enumerate_pms(&g, 10_000).matchings;
            let mut by_red: BTreeMap<usize, Vec<&PerfectMatching>> = BTreeMap::new();
            for pm in &pms {
                by_red.entry(pm.red_count()).or_default().push(pm);
            }
            for bucket in by_red.values() {
                for pair in bucket.windows(2).take(3) {
                    let (m1, m2) = (pair[0], pair[1]);
                    let set = build_zero_weight_modifying_set(&g, m1, m2, 2)
                        .unwrap()
                        .expect("equal red counts guarantee a zero-sum subset");
                    assert!(!set.modifiers.is_empty());
                    assert_eq!(set.total_weight(), 0);
                    let moved = apply_modifying_set(&g, m1, &set).unwrap();
                    assert_eq!(moved.red_count(), m1.red_count());
                    checked += 1;
                }
            }
        }
        assert!(checked > 50, "only {checked} pairs exercised");
    }

    #[test]
    fn unequal_red_pairs_behave_sanely() {
        for trial in 0u64..40 {
            let g = complete_colored(10, 4000 + trial);
            let m1 = min_red_pm(&g).unwrap();
            let m2 = crate::matching::max_red_pm(&g).unwrap();
            if m1 == m2 {
                continue;
            }
            match build_zero_weight_modifying_set(&g, &m1, &m2, 2) {
                Ok(Some(set)) => {
                    assert_eq!(set.total_weight(), 0);
                    let moved = apply_modifying_set(&g, &m1, &set).unwrap();
                    assert_eq!(moved.red_count(), m1.red_count());
                }
                Ok(None) => {}
                Err(e) => panic!("unexpected error: {e}"),
            }
        }
    }

    #[test]
    fn heavy_cycles_are_cut_into_arcs() {
        // A ring of 68 vertices whose odd edges are red gives a difference
        // cycle of weight +34, past the 2 tau = 32 whole-cycle cutoff for
        // t = 2, so it must be cut into arcs. A separate 4-cycle of weight
        // -1 on four extra vertices balances the harvested +1 modifier.
        let ring_n = 68;
        let n = ring_n + 4;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        let mut red: Vec<(usize, usize)> = (0..ring_n / 2)
            .map(|i| (2 * i + 1, (2 * i + 2) % ring_n))
            .collect();
        red.push((ring_n, ring_n + 1));
        let g = ColoredGraph::new(n, edges, red).unwrap();
        let mut m1_edges: Vec<Edge> = (0..n / 2).map(|i| Edge::new(2 * i, 2 * i + 1)).collect();
        let mut m2_edges: Vec<Edge> = (0..ring_n / 2)
            .map(|i| Edge::new(2 * i + 1, (2 * i + 2) % ring_n))
            .collect();
        m2_edges.push(Edge::new(ring_n, ring_n + 3));
        m2_edges.push(Edge::new(ring_n + 1, ring_n + 2));
        m1_edges.sort_unstable();
        m2_edges.sort_unstable();
        let m1 = g.perfect_matching(m1_edges).unwrap();
        let m2 = g.perfect_matching(m2_edges).unwrap();
        let diff = decompose_symmetric_difference(&g, &m1, &m2).unwrap();
        let weights: Vec<i64> = diff.cycles.iter().map(|c| c.weight()).collect();
        assert!(weights.contains(&34) && weights.contains(&-1), "{weights:?}");
        let set = build_zero_weight_modifying_set(&g, &m1, &m2, 2)
            .unwrap()
            .expect("harvested arc modifier balances the light cycle");
        assert_eq!(set.total_weight(), 0);
        assert!(set.modifiers.len() >= 2, "arc harvest plus whole cycle");
        let moved = apply_modifying_set(&g, &m1, &set).unwrap();
        assert_eq!(moved.red_count(), m1.red_count());
    }
}
