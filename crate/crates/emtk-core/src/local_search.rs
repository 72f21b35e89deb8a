//! Neighborhood profiles and the guess-difference local search.
//!
//! The distance between two perfect matchings is the smaller of the red and
//! blue edge counts of their symmetric difference. The radius-`s`
//! neighborhood of a matching `M` is profiled by guessing the difference one
//! color at a time: enumerate partial red matchings `X` within symmetric-
//! difference `s` of `M`'s red edges and complete each with a blue-only
//! perfect matching (so the completed matching has exactly `|X|` red edges),
//! then mirror the construction in blue. Every key the profile reports is
//! backed by a concrete matching; every matching within distance `s`
//! contributes its key. Completions are memoized by covered vertex set, which
//! is what makes the enumeration affordable.
//!
//! The local search walks from a minimum-red perfect matching toward the
//! target `k`, each step jumping to the largest profile key that does not
//! overshoot. Red counts strictly increase, so the walk takes at most `n/2`
//! steps. A stall is never evidence of infeasibility; answers are definitive
//! only when `k` falls outside the global red-count range.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::exec::{map_collect, ExecMode};
use crate::graph::{ColoredGraph, Edge, PerfectMatching};
use crate::matching;
use crate::{Error, Result};

/// Red-count keys reachable within a fixed distance of a base matching, each
/// with a witnessing perfect matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodProfile {
    radius: usize,
    entries: BTreeMap<usize, PerfectMatching>,
}

impl NeighborhoodProfile {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn is_achievable(&self, k: usize) -> bool {
        self.entries.contains_key(&k)
    }

    pub fn representative(&self, k: usize) -> Option<&PerfectMatching> {
        self.entries.get(&k)
    }

    /// Keys in ascending order.
    pub fn keys(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &PerfectMatching)> {
        self.entries.iter().map(|(k, m)| (*k, m))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

// One color phase of the profile. `phase_edges` are the graph's edges of the
// guessed color, `in_m` marks those currently in the matching. Enumerates
// every partial matching X among them with |X symdiff M-edges| <= radius,
// passing each complete X (as edge indices + covered-vertex mask) to `emit`.
fn enumerate_difference<F>(
    phase_edges: &[Edge],
    in_m: &[bool],
    radius: usize,
    emit: &mut F,
) where
    F: FnMut(&[usize], u64),
{
    fn dfs<F>(
        i: usize,
        cost: usize,
        used: u64,
        chosen: &mut Vec<usize>,
        phase_edges: &[Edge],
        in_m: &[bool],
        radius: usize,
        emit: &mut F,
    ) where
        F: FnMut(&[usize], u64),
    {
        if i == phase_edges.len() {
            emit(chosen, used);
            return;
        }
        let e = phase_edges[i];
        let (u, v) = e.endpoints();
        let mask = (1u64 << u) | (1u64 << v);
        // Exclude edge i: costs one unit of difference if M uses it.
        let drop_cost = cost + in_m[i] as usize;
        if drop_cost <= radius {
            dfs(i + 1, drop_cost, used, chosen, phase_edges, in_m, radius, emit);
        }
        // Include edge i: costs one unit if M does not use it.
        if used & mask == 0 {
            let add_cost = cost + !in_m[i] as usize;
            if add_cost <= radius {
                chosen.push(i);
                dfs(i + 1, add_cost, used | mask, chosen, phase_edges, in_m, radius, emit);
                chosen.pop();
            }
        }
    }
    dfs(0, 0, 0, &mut Vec::new(), phase_edges, in_m, radius, emit);
}

// Merge a candidate into the profile, keeping the lexicographically smallest
// edge list per key. Order-independent, so both execution modes agree.
fn merge_candidate(entries: &mut BTreeMap<usize, Vec<Edge>>, key: usize, candidate: Vec<Edge>) {
    match entries.get_mut(&key) {
        None => {
            entries.insert(key, candidate);
        }
        Some(best) => {
            if candidate < *best {
                *best = candidate;
            }
        }
    }
}

fn profile_phase(
    g: &ColoredGraph,
    m: &PerfectMatching,
    radius: usize,
    mode: ExecMode,
    guess_red: bool,
    entries: &mut BTreeMap<usize, Vec<Edge>>,
) {
    let phase_edges: Vec<Edge> = if guess_red {
        g.red_edges().collect()
    } else {
        g.blue_edges().collect()
    };
    let in_m: Vec<bool> = phase_edges.iter().map(|e| m.contains(*e)).collect();

    // Pass 1: collect the distinct covered-vertex masks of complete guesses.
    let mut masks = BTreeSet::new();
    enumerate_difference(&phase_edges, &in_m, radius, &mut |_, used| {
        masks.insert(used);
    });

    // Solve each completion once; the other color must cover the rest.
    let mask_list: Vec<u64> = masks.into_iter().collect();
    let completions: Vec<Option<Vec<Edge>>> = map_collect(mode, mask_list.clone(), |used| {
        let banned: Vec<bool> = (0..g.n()).map(|v| used >> v & 1 == 1).collect();
        matching::find_perfect_matching_avoiding(g, &banned, |e| {
            g.is_red(e).unwrap() != guess_red
        })
    });
    let cache: HashMap<u64, Option<Vec<Edge>>> =
        mask_list.into_iter().zip(completions).collect();

    // Pass 2: replay the enumeration and merge completed candidates.
    enumerate_difference(&phase_edges, &in_m, radius, &mut |chosen, used| {
        let Some(completion) = &cache[&used] else { return };
        let key = if guess_red {
            chosen.len()
        } else {
            g.n() / 2 - chosen.len()
        };
        let mut edges: Vec<Edge> = chosen.iter().map(|&i| phase_edges[i]).collect();
        edges.extend(completion.iter().copied());
        edges.sort_unstable();
        merge_candidate(entries, key, edges);
    });
}

/// Profile the radius-`radius` neighborhood of `m`: every reachable red
/// count, with one witnessing perfect matching each. Exact (sound and
/// complete) for the distance defined above.
pub fn neighborhood_profile(
    g: &ColoredGraph,
    m: &PerfectMatching,
    radius: usize,
    mode: ExecMode,
) -> Result<NeighborhoodProfile> {
    if g.n() > 64 {
        return Err(Error::InvalidParams(
            "neighborhood profiles support at most 64 vertices".into(),
        ));
    }
    let mut entries = BTreeMap::new();
    profile_phase(g, m, radius, mode, true, &mut entries);
    profile_phase(g, m, radius, mode, false, &mut entries);
    let entries: BTreeMap<usize, PerfectMatching> = entries
        .into_iter()
        .map(|(k, edges)| {
            let pm = g.perfect_matching(edges).expect("profile candidates are perfect matchings");
            debug_assert_eq!(pm.red_count(), k);
            (k, pm)
        })
        .collect();
    Ok(NeighborhoodProfile { radius, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalSearchOptions {
    /// Neighborhood radius `s`.
    pub radius: usize,
    pub mode: ExecMode,
}

impl Default for LocalSearchOptions {
    fn default() -> Self {
        LocalSearchOptions {
            radius: 3,
            mode: ExecMode::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalSearchOutcome {
    /// Perfect matching with exactly `k` red edges.
    Found(PerfectMatching),
    /// The graph has no perfect matching at all: definitive no.
    NoPerfectMatching,
    /// `k` is below the minimum red count of any perfect matching:
    /// definitive no.
    BelowMinimum { minimum: usize },
    /// `k` is above the maximum red count of any perfect matching:
    /// definitive no.
    AboveMaximum { maximum: usize },
    /// No profile key strictly between the current red count and `k`;
    /// inconclusive.
    Stalled { reached: usize },
}

impl LocalSearchOutcome {
    /// A definitive outcome answers the decision problem; a stall does not.
    pub fn is_definitive(&self) -> bool {
        !matches!(self, LocalSearchOutcome::Stalled { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSearchRun {
    pub outcome: LocalSearchOutcome,
    /// Red counts visited, starting at the minimum.
    pub trajectory: Vec<usize>,
    pub profiles_computed: usize,
}

/// Decide whether some perfect matching has exactly `k` red edges by walking
/// red counts upward from the minimum through radius-bounded neighborhoods.
/// `Found` answers are always correct; so are the range-based `No` answers;
/// a `Stalled` run proves nothing.
pub fn local_search_em(g: &ColoredGraph, k: usize, opts: &LocalSearchOptions) -> Result<LocalSearchRun> {
    let Some(start) = matching::min_red_pm(g) else {
        return Ok(LocalSearchRun {
            outcome: LocalSearchOutcome::NoPerfectMatching,
            trajectory: Vec::new(),
            profiles_computed: 0,
        });
    };
    let minimum = start.red_count();
    let mut trajectory = vec![minimum];
    if k < minimum {
        return Ok(LocalSearchRun {
            outcome: LocalSearchOutcome::BelowMinimum { minimum },
            trajectory,
            profiles_computed: 0,
        });
    }
    let maximum = matching::max_red_pm(g)
        .expect("a graph with a minimum-red matching has a maximum-red one")
        .red_count();
    if k > maximum {
        return Ok(LocalSearchRun {
            outcome: LocalSearchOutcome::AboveMaximum { maximum },
            trajectory,
            profiles_computed: 0,
        });
    }

    let mut current = start;
    let mut profiles_computed = 0;
    while current.red_count() != k {
        let profile = neighborhood_profile(g, &current, opts.radius, opts.mode)?;
        profiles_computed += 1;
        // Largest key that moves strictly toward k without overshooting.
        let step = profile
            .entries
            .range((current.red_count() + 1)..=k)
            .next_back()
            .map(|(key, pm)| (*key, pm.clone()));
        match step {
            None => {
                return Ok(LocalSearchRun {
                    outcome: LocalSearchOutcome::Stalled { reached: current.red_count() },
                    trajectory,
                    profiles_computed,
                });
            }
            Some((key, pm)) => {
                debug_assert!(key > current.red_count() && key <= k);
                trajectory.push(key);
                current = pm;
            }
        }
        debug_assert!(trajectory.len() <= g.n() / 2 + 1, "red counts strictly increase");
    }
    Ok(LocalSearchRun {
        outcome: LocalSearchOutcome::Found(current),
        trajectory,
        profiles_computed,
    })
}
