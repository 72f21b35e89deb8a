//! Extremal perfect matchings via max-weight general matching.
//!
//! The solver is a primal-dual blossom algorithm for maximum-weight matching
//! in general graphs (O(n^3)), run in maximum-cardinality mode: it returns a
//! maximum-cardinality matching of maximum weight among those. Weights are
//! doubled internally so every dual variable and every delta stays integral.
//!
//! On top of it sit the three operations the rest of the crate needs:
//!
//! * [`find_perfect_matching`]: any perfect matching using only allowed edges,
//! * [`min_red_pm`]: a perfect matching with the fewest red edges,
//! * [`max_red_pm`]: a perfect matching with the most red edges.
//!
//! All entry points are deterministic. The two extremal operations further
//! canonicalize their answer to the lexicographically smallest optimal
//! matching (by sorted edge list), so equal inputs give identical structures
//! across runs and execution modes. Internal callers that only need *an*
//! optimum use the raw variants and skip the canonicalization passes.

use crate::graph::{ColoredGraph, Edge, PerfectMatching};

const NONE: usize = usize::MAX;

/// Maximum-weight matching in maximum-cardinality mode.
///
/// `edges` are `(u, v, weight)` with `u != v`; parallel edges are not
/// expected. Returns `mate[v] = Some(partner)` for matched vertices.
fn max_weight_matching(nvertex: usize, edges: &[(usize, usize, i64)]) -> Vec<Option<usize>> {
    if nvertex == 0 || edges.is_empty() {
        return vec![None; nvertex];
    }
    let mut solver = Solver::new(nvertex, edges);
    solver.run();
    #[cfg(debug_assertions)]
    solver.verify_optimum();
    (0..nvertex)
        .map(|v| {
            let p = solver.mate[v];
            if p == NONE {
                None
            } else {
                Some(solver.endpoint(p))
            }
        })
        .collect()
}

struct Solver<'a> {
    nvertex: usize,
    edges: &'a [(usize, usize, i64)],
    // Remote endpoints of edges incident to each vertex: endpoint index
    // p encodes edge p/2, side p%2.
    neighbend: Vec<Vec<usize>>,
    // Matched remote endpoint per vertex, NONE if exposed.
    mate: Vec<usize>,
    // 0 free, 1 = S, 2 = T, 5 = S marked during ancestor scans.
    label: Vec<u8>,
    labelend: Vec<usize>,
    inblossom: Vec<usize>,
    blossomparent: Vec<usize>,
    blossomchilds: Vec<Vec<usize>>,
    blossombase: Vec<usize>,
    blossomendps: Vec<Vec<usize>>,
    bestedge: Vec<usize>,
    // None: fall back to raw incident edges; Some: cached least-slack edges
    // per neighboring S-blossom (possibly empty).
    blossombestedges: Vec<Option<Vec<usize>>>,
    unusedblossoms: Vec<usize>,
    // Doubled scale: initialized to 2 * maxweight.
    dualvar: Vec<i64>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Solver<'a> {
    fn new(nvertex: usize, edges: &'a [(usize, usize, i64)]) -> Self {
        let nedge = edges.len();
        let maxweight = edges.iter().map(|e| e.2).max().unwrap_or(0).max(0);
        let mut neighbend = vec![Vec::new(); nvertex];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            debug_assert!(i != j && i < nvertex && j < nvertex);
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }
        Solver {
            nvertex,
            edges,
            neighbend,
            mate: vec![NONE; nvertex],
            label: vec![0; 2 * nvertex],
            labelend: vec![NONE; 2 * nvertex],
            inblossom: (0..nvertex).collect(),
            blossomparent: vec![NONE; 2 * nvertex],
            blossomchilds: vec![Vec::new(); 2 * nvertex],
            blossombase: (0..nvertex).chain(std::iter::repeat(NONE).take(nvertex)).collect(),
            blossomendps: vec![Vec::new(); 2 * nvertex],
            bestedge: vec![NONE; 2 * nvertex],
            blossombestedges: vec![None; 2 * nvertex],
            unusedblossoms: (nvertex..2 * nvertex).collect(),
            dualvar: std::iter::repeat(2 * maxweight)
                .take(nvertex)
                .chain(std::iter::repeat(0).take(nvertex))
                .collect(),
            allowedge: vec![false; nedge],
            queue: Vec::new(),
        }
    }

    fn endpoint(&self, p: usize) -> usize {
        let (i, j, _) = self.edges[p / 2];
        if p % 2 == 0 {
            i
        } else {
            j
        }
    }

    // Doubled-scale slack; nonnegative for every edge throughout.
    fn slack(&self, k: usize) -> i64 {
        let (i, j, w) = self.edges[k];
        self.dualvar[i] + self.dualvar[j] - 4 * w
    }

    fn blossom_leaves(&self, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![b];
        while let Some(t) = stack.pop() {
            if t < self.nvertex {
                out.push(t);
            } else {
                stack.extend(self.blossomchilds[t].iter().copied());
            }
        }
        out
    }

    fn assign_label(&mut self, w: usize, t: u8, p: usize) {
        let b = self.inblossom[w];
        debug_assert!(self.label[w] == 0 && self.label[b] == 0);
        self.label[w] = t;
        self.label[b] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        self.bestedge[w] = NONE;
        self.bestedge[b] = NONE;
        if t == 1 {
            let leaves = self.blossom_leaves(b);
            self.queue.extend(leaves);
        } else if t == 2 {
            let base = self.blossombase[b];
            debug_assert!(self.mate[base] != NONE);
            let m = self.mate[base];
            self.assign_label(self.endpoint(m), 1, m ^ 1);
        }
    }

    // Trace back from v and w to find the closest common tree ancestor;
    // returns its base vertex or NONE if the roots differ.
    fn scan_blossom(&mut self, v: usize, w: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        let mut v = v;
        let mut w = w;
        while v != NONE || w != NONE {
            let mut b = self.inblossom[v];
            if self.label[b] & 4 != 0 {
                base = self.blossombase[b];
                break;
            }
            debug_assert_eq!(self.label[b], 1);
            path.push(b);
            self.label[b] = 5;
            debug_assert_eq!(self.labelend[b], self.mate[self.blossombase[b]]);
            if self.labelend[b] == NONE {
                v = NONE;
            } else {
                v = self.endpoint(self.labelend[b]);
                b = self.inblossom[v];
                debug_assert_eq!(self.label[b], 2);
                debug_assert!(self.labelend[b] != NONE);
                v = self.endpoint(self.labelend[b]);
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = 1;
        }
        base
    }

    // Contract the odd cycle through edge k with base `base` into a new
    // S-blossom.
    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unusedblossoms.pop().expect("blossom pool exhausted");
        self.blossombase[b] = base;
        self.blossomparent[b] = NONE;
        self.blossomparent[bb] = b;

        let mut path = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossomparent[bv] = b;
            path.push(bv);
            endps.push(self.labelend[bv]);
            debug_assert!(
                self.label[bv] == 2
                    || (self.label[bv] == 1 && self.labelend[bv] == self.mate[self.blossombase[bv]])
            );
            debug_assert!(self.labelend[bv] != NONE);
            v = self.endpoint(self.labelend[bv]);
            bv = self.inblossom[v];
        }
        path.push(bb);
        path.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossomparent[bw] = b;
            path.push(bw);
            endps.push(self.labelend[bw] ^ 1);
            debug_assert!(
                self.label[bw] == 2
                    || (self.label[bw] == 1 && self.labelend[bw] == self.mate[self.blossombase[bw]])
            );
            debug_assert!(self.labelend[bw] != NONE);
            w = self.endpoint(self.labelend[bw]);
            bw = self.inblossom[w];
        }

        self.blossomchilds[b] = path.clone();
        self.blossomendps[b] = endps;
        debug_assert_eq!(self.label[bb], 1);
        self.label[b] = 1;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = 0;
        for leaf in self.blossom_leaves(b) {
            if self.label[self.inblossom[leaf]] == 2 {
                // Former T-vertex becomes an S-vertex; it still has to be
                // scanned.
                self.queue.push(leaf);
            }
            self.inblossom[leaf] = b;
        }

        // Merge best-edge lists of the sub-blossoms.
        let mut bestedgeto = vec![NONE; 2 * self.nvertex];
        for &bv in &path {
            let nblists: Vec<Vec<usize>> = match &self.blossombestedges[bv] {
                None => self
                    .blossom_leaves(bv)
                    .into_iter()
                    .map(|leaf| self.neighbend[leaf].iter().map(|p| p / 2).collect())
                    .collect(),
                Some(cached) => vec![cached.clone()],
            };
            for nblist in nblists {
                for k in nblist {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.inblossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let _ = i;
                    let bj = self.inblossom[j];
                    if bj != b
                        && self.label[bj] == 1
                        && (bestedgeto[bj] == NONE || self.slack(k) < self.slack(bestedgeto[bj]))
                    {
                        bestedgeto[bj] = k;
                    }
                }
            }
            self.blossombestedges[bv] = None;
            self.bestedge[bv] = NONE;
        }
        let merged: Vec<usize> = bestedgeto.into_iter().filter(|&k| k != NONE).collect();
        self.bestedge[b] = NONE;
        for &k in &merged {
            if self.bestedge[b] == NONE || self.slack(k) < self.slack(self.bestedge[b]) {
                self.bestedge[b] = k;
            }
        }
        self.blossombestedges[b] = Some(merged);
    }

    // Expand blossom b, promoting its children to top level. During a stage
    // (endstage = false, b is a T-blossom with zero dual) the path through the
    // entry child is relabeled.
    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        let childs = self.blossomchilds[b].clone();
        for &s in &childs {
            self.blossomparent[s] = NONE;
            if s < self.nvertex {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s] == 0 {
                self.expand_blossom(s, endstage);
            } else {
                for leaf in self.blossom_leaves(s) {
                    self.inblossom[leaf] = s;
                }
            }
        }
        if !endstage && self.label[b] == 2 {
            // The expanding blossom lies on an alternating tree path; walk
            // from the entry endpoint to the base, alternating T/S labels.
            debug_assert!(self.labelend[b] != NONE);
            let entrychild = self.inblossom[self.endpoint(self.labelend[b] ^ 1)];
            let endps = self.blossomendps[b].clone();
            let len = childs.len() as i64;
            let at = |j: i64| -> usize { childs[j.rem_euclid(len) as usize] };
            let endp_at = |j: i64| -> usize { endps[j.rem_euclid(len) as usize] };
            let mut j = childs
                .iter()
                .position(|&c| c == entrychild)
                .expect("entry child in expanding blossom") as i64;
            let (jstep, endptrick): (i64, i64) = if j & 1 != 0 {
                j -= len;
                (1, 0)
            } else {
                (-1, 1)
            };
            let mut p = self.labelend[b];
            while j != 0 {
                // Relabel the T-sub-blossom.
                let t_entry = self.endpoint(p ^ 1);
                let forward = self.endpoint((endp_at(j - endptrick) ^ endptrick as usize) ^ 1);
                self.label[t_entry] = 0;
                self.label[forward] = 0;
                self.assign_label(t_entry, 2, p);
                self.allowedge[endp_at(j - endptrick) / 2] = true;
                j += jstep;
                p = endp_at(j - endptrick) ^ endptrick as usize;
                self.allowedge[p / 2] = true;
                j += jstep;
            }
            // Relabel the base sub-blossom without stepping through its mate.
            let bv = at(j);
            let base_entry = self.endpoint(p ^ 1);
            self.label[base_entry] = 2;
            self.label[bv] = 2;
            self.labelend[base_entry] = p;
            self.labelend[bv] = p;
            self.bestedge[bv] = NONE;
            // Sub-blossoms between base and entry keep label 0 unless some
            // vertex inside already carries a T label from outside.
            j += jstep;
            while at(j) != entrychild {
                let bv = at(j);
                if self.label[bv] == 1 {
                    j += jstep;
                    continue;
                }
                let mut labeled = NONE;
                for leaf in self.blossom_leaves(bv) {
                    if self.label[leaf] != 0 {
                        labeled = leaf;
                        break;
                    }
                }
                if labeled != NONE {
                    debug_assert_eq!(self.label[labeled], 2);
                    debug_assert_eq!(self.inblossom[labeled], bv);
                    self.label[labeled] = 0;
                    let basemate = self.mate[self.blossombase[bv]];
                    let basemate_end = self.endpoint(basemate);
                    self.label[basemate_end] = 0;
                    let le = self.labelend[labeled];
                    self.assign_label(labeled, 2, le);
                }
                j += jstep;
            }
        }
        self.label[b] = 0;
        self.labelend[b] = NONE;
        self.blossomchilds[b] = Vec::new();
        self.blossomendps[b] = Vec::new();
        self.blossombase[b] = NONE;
        self.blossombestedges[b] = None;
        self.bestedge[b] = NONE;
        self.unusedblossoms.push(b);
    }

    // Swap matched and unmatched edges along the path inside blossom b from
    // vertex v to the base, then rotate the child list so v becomes the base.
    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != b {
            t = self.blossomparent[t];
        }
        if t >= self.nvertex {
            self.augment_blossom(t, v);
        }
        let len = self.blossomchilds[b].len() as i64;
        let i = self.blossomchilds[b].iter().position(|&c| c == t).unwrap() as i64;
        let mut j = i;
        let (jstep, endptrick): (i64, i64) = if i & 1 != 0 {
            j -= len;
            (1, 0)
        } else {
            (-1, 1)
        };
        while j != 0 {
            j += jstep;
            let t1 = self.blossomchilds[b][j.rem_euclid(len) as usize];
            let p = self.blossomendps[b][(j - endptrick).rem_euclid(len) as usize] ^ endptrick as usize;
            if t1 >= self.nvertex {
                let ep = self.endpoint(p);
                self.augment_blossom(t1, ep);
            }
            j += jstep;
            let t2 = self.blossomchilds[b][j.rem_euclid(len) as usize];
            if t2 >= self.nvertex {
                let ep = self.endpoint(p ^ 1);
                self.augment_blossom(t2, ep);
            }
            let ep = self.endpoint(p);
            let ep1 = self.endpoint(p ^ 1);
            self.mate[ep] = p ^ 1;
            self.mate[ep1] = p;
        }
        let i = i as usize;
        self.blossomchilds[b].rotate_left(i);
        self.blossomendps[b].rotate_left(i);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        debug_assert_eq!(self.blossombase[b], v);
    }

    // Augment along the path through tree edges from both ends of edge k to
    // the respective roots.
    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (mut s, mut p) in [(v, 2 * k + 1), (w, 2 * k)] {
            loop {
                let bs = self.inblossom[s];
                debug_assert_eq!(self.label[bs], 1);
                debug_assert_eq!(self.labelend[bs], self.mate[self.blossombase[bs]]);
                if bs >= self.nvertex {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.labelend[bs] == NONE {
                    break;
                }
                let t = self.endpoint(self.labelend[bs]);
                let bt = self.inblossom[t];
                debug_assert_eq!(self.label[bt], 2);
                debug_assert!(self.labelend[bt] != NONE);
                s = self.endpoint(self.labelend[bt]);
                // The tree edge attaches inside bt at j, not at the base t;
                // the blossom is rotated so j takes over as base before it is
                // matched outward.
                let j = self.endpoint(self.labelend[bt] ^ 1);
                debug_assert_eq!(self.blossombase[bt], t);
                if bt >= self.nvertex {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = self.labelend[bt] ^ 1;
            }
        }
    }

    fn run(&mut self) {
        for _ in 0..self.nvertex {
            self.label.iter_mut().for_each(|l| *l = 0);
            self.bestedge.iter_mut().for_each(|e| *e = NONE);
            for b in self.nvertex..2 * self.nvertex {
                self.blossombestedges[b] = None;
            }
            self.allowedge.iter_mut().for_each(|a| *a = false);
            self.queue.clear();
            for v in 0..self.nvertex {
                if self.mate[v] == NONE && self.label[self.inblossom[v]] == 0 {
                    self.assign_label(v, 1, NONE);
                }
            }
            let mut augmented = false;
            loop {
                while let Some(v) = self.queue.pop() {
                    debug_assert_eq!(self.label[self.inblossom[v]], 1);
                    let ends = self.neighbend[v].clone();
                    for p in ends {
                        let k = p / 2;
                        let w = self.endpoint(p);
                        if self.inblossom[v] == self.inblossom[w] {
                            continue;
                        }
                        let mut kslack = 0;
                        if !self.allowedge[k] {
                            kslack = self.slack(k);
                            if kslack <= 0 {
                                self.allowedge[k] = true;
                            }
                        }
                        if self.allowedge[k] {
                            if self.label[self.inblossom[w]] == 0 {
                                self.assign_label(w, 2, p ^ 1);
                            } else if self.label[self.inblossom[w]] == 1 {
                                let base = self.scan_blossom(v, w);
                                if base != NONE {
                                    self.add_blossom(base, k);
                                } else {
                                    self.augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if self.label[w] == 0 {
                                debug_assert_eq!(self.label[self.inblossom[w]], 2);
                                self.label[w] = 2;
                                self.labelend[w] = p ^ 1;
                            }
                        } else if self.label[self.inblossom[w]] == 1 {
                            let b = self.inblossom[v];
                            if self.bestedge[b] == NONE || kslack < self.slack(self.bestedge[b]) {
                                self.bestedge[b] = k;
                            }
                        } else if self.label[w] == 0
                            && (self.bestedge[w] == NONE || kslack < self.slack(self.bestedge[w]))
                        {
                            self.bestedge[w] = k;
                        }
                    }
                    if augmented {
                        break;
                    }
                }
                if augmented {
                    break;
                }

                // No tight edge left: compute the dual adjustment.
                let mut deltatype: i8 = -1;
                let mut delta: i64 = 0;
                let mut deltaedge: usize = NONE;
                let mut deltablossom: usize = NONE;
                for v in 0..self.nvertex {
                    if self.label[self.inblossom[v]] == 0 && self.bestedge[v] != NONE {
                        let d = self.slack(self.bestedge[v]);
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 2;
                            deltaedge = self.bestedge[v];
                        }
                    }
                }
                for b in 0..2 * self.nvertex {
                    if self.blossomparent[b] == NONE
                        && self.label[b] == 1
                        && self.bestedge[b] != NONE
                    {
                        let kslack = self.slack(self.bestedge[b]);
                        debug_assert_eq!(kslack % 2, 0);
                        let d = kslack / 2;
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 3;
                            deltaedge = self.bestedge[b];
                        }
                    }
                }
                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] != NONE
                        && self.blossomparent[b] == NONE
                        && self.label[b] == 2
                        && (deltatype == -1 || self.dualvar[b] < delta)
                    {
                        delta = self.dualvar[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if deltatype == -1 {
                    // The matching is already maximum; relax the duals to a
                    // consistent state and stop the stage.
                    deltatype = 1;
                    delta = (0..self.nvertex).map(|v| self.dualvar[v]).min().unwrap().max(0);
                }

                for v in 0..self.nvertex {
                    match self.label[self.inblossom[v]] {
                        1 => self.dualvar[v] -= delta,
                        2 => self.dualvar[v] += delta,
                        _ => {}
                    }
                }
                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] != NONE && self.blossomparent[b] == NONE {
                        match self.label[b] {
                            1 => self.dualvar[b] += delta,
                            2 => self.dualvar[b] -= delta,
                            _ => {}
                        }
                    }
                }

                match deltatype {
                    1 => break,
                    2 => {
                        self.allowedge[deltaedge] = true;
                        let (mut i, j, _) = self.edges[deltaedge];
                        if self.label[self.inblossom[i]] == 0 {
                            i = j;
                        }
                        debug_assert_eq!(self.label[self.inblossom[i]], 1);
                        self.queue.push(i);
                    }
                    3 => {
                        self.allowedge[deltaedge] = true;
                        let (i, _, _) = self.edges[deltaedge];
                        debug_assert_eq!(self.label[self.inblossom[i]], 1);
                        self.queue.push(i);
                    }
                    4 => self.expand_blossom(deltablossom, false),
                    _ => unreachable!(),
                }
            }
            if !augmented {
                break;
            }
            for b in self.nvertex..2 * self.nvertex {
                if self.blossomparent[b] == NONE
                    && self.blossombase[b] != NONE
                    && self.label[b] == 1
                    && self.dualvar[b] == 0
                {
                    self.expand_blossom(b, true);
                }
            }
        }
    }

    // Complementary slackness check on the final state.
    #[cfg(debug_assertions)]
    fn verify_optimum(&self) {
        for k in 0..self.edges.len() {
            let (i, j, w) = self.edges[k];
            let mut s = self.dualvar[i] + self.dualvar[j] - 4 * w;
            let mut iblossoms = vec![i];
            let mut jblossoms = vec![j];
            while self.blossomparent[*iblossoms.last().unwrap()] != NONE {
                iblossoms.push(self.blossomparent[*iblossoms.last().unwrap()]);
            }
            while self.blossomparent[*jblossoms.last().unwrap()] != NONE {
                jblossoms.push(self.blossomparent[*jblossoms.last().unwrap()]);
            }
            for (bi, bj) in iblossoms.iter().rev().zip(jblossoms.iter().rev()) {
                if bi != bj {
                    break;
                }
                s += 2 * self.dualvar[*bi];
            }
            assert!(s >= 0, "negative slack on edge {k}");
            if self.mate[i] / 2 == k || self.mate[j] / 2 == k {
                assert!(self.mate[i] / 2 == k && self.mate[j] / 2 == k);
                assert_eq!(s, 0, "matched edge {k} not tight");
            }
        }
        for b in self.nvertex..2 * self.nvertex {
            if self.blossombase[b] != NONE {
                assert!(self.dualvar[b] >= 0);
            }
        }
        for v in 0..self.nvertex {
            if self.mate[v] != NONE {
                assert_eq!(self.endpoint(self.mate[self.endpoint(self.mate[v])]), v);
            }
        }
    }
}

/// Weight table that makes maximum weight mean fewest red edges.
fn min_red_weights(g: &ColoredGraph, banned: &[bool]) -> Vec<(usize, usize, i64)> {
    g.edges()
        .iter()
        .filter(|e| {
            let (u, v) = e.endpoints();
            !banned[u] && !banned[v]
        })
        .map(|e| {
            let (u, v) = e.endpoints();
            let w = if g.is_red(*e).unwrap() { -1 } else { 0 };
            (u, v, w)
        })
        .collect()
}

fn mate_to_edges(mate: &[Option<usize>]) -> Vec<Edge> {
    let mut out = Vec::new();
    for (v, m) in mate.iter().enumerate() {
        if let Some(u) = m {
            if v < *u {
                out.push(Edge::new(v, *u));
            }
        }
    }
    out
}

/// Minimum-red perfect matching on the vertices where `banned` is false, or
/// `None` if those vertices admit no perfect matching. Deterministic but not
/// canonicalized; edge list comes back sorted.
pub(crate) fn min_red_edges_avoiding(g: &ColoredGraph, banned: &[bool]) -> Option<Vec<Edge>> {
    debug_assert_eq!(banned.len(), g.n());
    let edges = min_red_weights(g, banned);
    let mate = max_weight_matching(g.n(), &edges);
    for v in 0..g.n() {
        if !banned[v] && mate[v].is_none() {
            return None;
        }
    }
    Some(mate_to_edges(&mate))
}

/// Raw (uncanonicalized) minimum-red perfect matching.
pub(crate) fn min_red_pm_raw(g: &ColoredGraph) -> Option<PerfectMatching> {
    let banned = vec![false; g.n()];
    let edges = min_red_edges_avoiding(g, &banned)?;
    Some(g.perfect_matching(edges).expect("solver returned a valid perfect matching"))
}

// Lexicographically smallest perfect matching among those achieving the
// optimal red count: force edges in canonical order, keeping each one exactly
// when the forced set still extends to an optimum.
fn lex_min_optimal(g: &ColoredGraph, target_red: usize) -> PerfectMatching {
    let n = g.n();
    let mut banned = vec![false; n];
    let mut forced: Vec<Edge> = Vec::new();
    let mut forced_red = 0usize;
    for &e in g.edges() {
        let (u, v) = e.endpoints();
        if banned[u] || banned[v] {
            continue;
        }
        if forced.len() * 2 + 2 <= n || n == 0 {
            // Tentatively ban the endpoints and check that the rest still
            // reaches the target.
            banned[u] = true;
            banned[v] = true;
            let e_red = g.is_red(e).unwrap() as usize;
            match min_red_edges_avoiding(g, &banned) {
                Some(rest)
                    if forced_red + e_red + g.count_red(rest.iter().copied()).unwrap()
                        == target_red =>
                {
                    forced.push(e);
                    forced_red += e_red;
                }
                _ => {
                    banned[u] = false;
                    banned[v] = false;
                }
            }
        }
        if forced.len() * 2 == n {
            break;
        }
    }
    debug_assert_eq!(forced.len() * 2, n);
    g.perfect_matching(forced).expect("forced set is a perfect matching")
}

/// Perfect matching with the fewest red edges, or `None` if the graph has no
/// perfect matching. Returns the lexicographically smallest optimum (by
/// sorted edge list), so the answer is a canonical representative.
pub fn min_red_pm(g: &ColoredGraph) -> Option<PerfectMatching> {
    let raw = min_red_pm_raw(g)?;
    Some(lex_min_optimal(g, raw.red_count()))
}

/// Perfect matching with the most red edges: minimum-red under the inverted
/// coloring, mapped back. Canonicalized like [`min_red_pm`].
pub fn max_red_pm(g: &ColoredGraph) -> Option<PerfectMatching> {
    let inv = g.invert_coloring();
    let pm = min_red_pm(&inv)?;
    Some(g.perfect_matching(pm.edges().iter().copied()).unwrap())
}

/// Any perfect matching using only edges accepted by `allowed`, or `None`.
/// Deterministic; red counts and membership refer to the full graph.
pub fn find_perfect_matching<F>(g: &ColoredGraph, allowed: F) -> Option<PerfectMatching>
where
    F: Fn(Edge) -> bool,
{
    let edges: Vec<(usize, usize, i64)> = g
        .edges()
        .iter()
        .filter(|e| allowed(**e))
        .map(|e| {
            let (u, v) = e.endpoints();
            (u, v, 0)
        })
        .collect();
    let mate = max_weight_matching(g.n(), &edges);
    if mate.iter().any(|m| m.is_none()) {
        return None;
    }
    Some(g.perfect_matching(mate_to_edges(&mate)).unwrap())
}

/// Perfect matching on the non-banned vertices avoiding banned vertices
/// entirely, using only allowed edges. Used by completion searches that pair
/// off a leftover vertex set.
pub(crate) fn find_perfect_matching_avoiding<F>(
    g: &ColoredGraph,
    banned: &[bool],
    allowed: F,
) -> Option<Vec<Edge>>
where
    F: Fn(Edge) -> bool,
{
    let edges: Vec<(usize, usize, i64)> = g
        .edges()
        .iter()
        .filter(|e| {
            let (u, v) = e.endpoints();
            !banned[u] && !banned[v] && allowed(**e)
        })
        .map(|e| {
            let (u, v) = e.endpoints();
            (u, v, 0)
        })
        .collect();
    let mate = max_weight_matching(g.n(), &edges);
    for v in 0..g.n() {
        if !banned[v] && mate[v].is_none() {
            return None;
        }
    }
    Some(mate_to_edges(&mate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ColoredGraph;
    use crate::oracle;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_instance(rng: &mut ChaCha8Rng, n: usize, p: f64) -> ColoredGraph {
        let mut edges = Vec::new();
        let mut reds = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                    if rng.random_bool(0.5) {
                        reds.push((u, v));
                    }
                }
            }
        }
        ColoredGraph::new(n, edges, reds).unwrap()
    }

    #[test]
    fn min_red_matches_exhaustive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xE1);
        let mut nontrivial = 0;
        for trial in 0..600 {
            let n = 2 * (1 + (trial % 6));
            // Sparser instances keep odd components and pendant paths around
            // across stages, where the blossom bookkeeping is hairiest.
            let p = [0.3, 0.45, 0.6][trial % 3];
            let g = random_instance(&mut rng, n, p);
            let landscape = oracle::em_landscape(&g, oracle::DEFAULT_PM_LIMIT);
            assert!(!landscape.truncated);
            let got = min_red_pm(&g);
            match landscape.min() {
                None => assert!(got.is_none(), "solver found a PM the oracle missed"),
                Some(best) => {
                    let pm = got.expect("oracle found a PM the solver missed");
                    assert_eq!(pm.red_count(), best);
                    nontrivial += 1;
                }
            }
        }
        assert!(nontrivial > 200, "random instances too sparse to be a real test");
    }

    #[test]
    fn max_red_matches_exhaustive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xE2);
        for trial in 0..300 {
            let n = 2 * (1 + (trial % 6));
            let g = random_instance(&mut rng, n, [0.35, 0.6][trial % 2]);
            let landscape = oracle::em_landscape(&g, oracle::DEFAULT_PM_LIMIT);
            let got = max_red_pm(&g);
            match landscape.max() {
                None => assert!(got.is_none()),
                Some(best) => assert_eq!(got.unwrap().red_count(), best),
            }
        }
    }

    #[test]
    fn extremal_pms_are_lexicographically_smallest_optima() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xE3);
        for trial in 0..200 {
            let n = 2 * (1 + (trial % 4));
            let g = random_instance(&mut rng, n, 0.65);
            let enumeration = oracle::enumerate_pms(&g, oracle::DEFAULT_PM_LIMIT);
            let Some(best) = enumeration.matchings.iter().map(|m| m.red_count()).min() else {
                continue;
            };
            // enumerate_pms emits matchings in canonical order, so the first
            // optimum is the lexicographic minimum.
            let expected = enumeration
                .matchings
                .iter()
                .find(|m| m.red_count() == best)
                .unwrap();
            assert_eq!(&min_red_pm(&g).unwrap(), expected);
        }
    }

    #[test]
    fn find_perfect_matching_respects_allowed_filter() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xE4);
        for trial in 0..200 {
            let n = 2 * (1 + (trial % 4));
            let g = random_instance(&mut rng, n, 0.6);
            // Allow only blue edges; compare against the oracle restricted
            // the same way.
            let got = find_perfect_matching(&g, |e| !g.is_red(e).unwrap());
            let mut oracle_has = false;
            oracle::for_each_pm(&g, |edges| {
                if edges.iter().all(|e| !g.is_red(*e).unwrap()) {
                    oracle_has = true;
                    return std::ops::ControlFlow::Break(());
                }
                std::ops::ControlFlow::Continue(())
            });
            assert_eq!(got.is_some(), oracle_has, "trial {trial}");
            if let Some(pm) = got {
                assert!(pm.edges().iter().all(|e| !g.is_red(*e).unwrap()));
                assert_eq!(pm.red_count(), 0);
            }
        }
    }

    #[test]
    fn avoiding_banned_vertices_solves_induced_subgraph() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xE5);
        for trial in 0..200 {
            let n = 2 * (2 + (trial % 4));
            let g = random_instance(&mut rng, n, 0.6);
            let mut banned = vec![false; n];
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n);
            while b == a {
                b = rng.random_range(0..n);
            }
            banned[a] = true;
            banned[b] = true;
            let got = min_red_edges_avoiding(&g, &banned);
            // Oracle on the induced subgraph, relabeled to 0..n-2.
            let keep: Vec<usize> = (0..n).filter(|v| !banned[*v]).collect();
            let index_of = |v: usize| keep.iter().position(|&x| x == v);
            let mut sub_edges = Vec::new();
            let mut sub_reds = Vec::new();
            for e in g.edges() {
                let (u, v) = e.endpoints();
                if let (Some(iu), Some(iv)) = (index_of(u), index_of(v)) {
                    sub_edges.push((iu, iv));
                    if g.is_red(*e).unwrap() {
                        sub_reds.push((iu, iv));
                    }
                }
            }
            let sub = ColoredGraph::new(n - 2, sub_edges, sub_reds).unwrap();
            let sub_best = oracle::em_landscape(&sub, oracle::DEFAULT_PM_LIMIT).min();
            match (got, sub_best) {
                (None, None) => {}
                (Some(edges), Some(best)) => {
                    assert!(edges.iter().all(|e| {
                        let (u, v) = e.endpoints();
                        !banned[u] && !banned[v]
                    }));
                    assert_eq!(g.count_red(edges.iter().copied()).unwrap(), best);
                }
                (got, want) => panic!("solver {got:?} vs oracle {want:?}"),
            }
        }
    }

    #[test]
    fn deterministic_across_runs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xE6);
        for _ in 0..50 {
            let g = random_instance(&mut rng, 10, 0.5);
            assert_eq!(min_red_pm(&g), min_red_pm(&g));
            assert_eq!(max_red_pm(&g), max_red_pm(&g));
        }
    }

    #[test]
    fn dense_blossom_stress() {
        // Complete graphs of odd and even order exercise blossom creation,
        // expansion and augmentation through nested odd cycles.
        for n in 2..=12 {
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
                .collect();
            let reds: Vec<(usize, usize)> = edges.iter().copied().filter(|(u, v)| (u + v) % 3 == 0).collect();
            let g = ColoredGraph::new(n, edges, reds).unwrap();
            let got = min_red_pm(&g);
            if n % 2 == 1 {
                assert!(got.is_none());
            } else {
                let best = oracle::em_landscape(&g, oracle::DEFAULT_PM_LIMIT).min().unwrap();
                assert_eq!(got.unwrap().red_count(), best);
            }
        }
    }

    #[test]
    fn augmenting_path_through_entered_blossom_rematches_entry_vertex() {
        // The path from 2 enters the 1-5-7 triangle at 7 while the triangle's
        // matched base is elsewhere; augmenting must rotate the blossom so
        // the entry vertex is rematched outward. The mate pairing used to
        // come out inconsistent on this shape.
        let core = ColoredGraph::new(
            8,
            [(0, 3), (1, 5), (1, 7), (2, 4), (4, 7), (5, 6), (5, 7)],
            [(0, 3), (5, 6)],
        )
        .unwrap();
        let pm = min_red_pm(&core).expect("unique perfect matching exists");
        assert_eq!(pm.red_count(), 2);

        // The random instance the shape was carved from; landscape 1..=6.
        let g = ColoredGraph::new(
            12,
            [
                (0, 1),
                (0, 2),
                (0, 4),
                (0, 5),
                (0, 8),
                (0, 9),
                (0, 11),
                (1, 6),
                (1, 7),
                (1, 8),
                (2, 5),
                (2, 9),
                (2, 10),
                (2, 11),
                (3, 5),
                (3, 6),
                (3, 9),
                (3, 11),
                (4, 7),
                (4, 10),
                (4, 11),
                (5, 8),
                (5, 9),
                (6, 8),
                (6, 10),
                (7, 8),
                (8, 11),
                (9, 10),
                (9, 11),
            ],
            [
                (0, 1),
                (0, 2),
                (0, 11),
                (1, 7),
                (2, 5),
                (2, 10),
                (3, 5),
                (3, 9),
                (3, 11),
                (4, 7),
                (4, 11),
                (5, 9),
                (6, 8),
                (6, 10),
                (9, 10),
            ],
        )
        .unwrap();
        assert_eq!(min_red_pm(&g).unwrap().red_count(), 1);
        assert_eq!(max_red_pm(&g).unwrap().red_count(), 6);
    }

    #[test]
    fn empty_vertex_set_has_empty_perfect_matching() {
        let g = ColoredGraph::new(0, Vec::<(usize, usize)>::new(), Vec::<(usize, usize)>::new()).unwrap();
        let pm = min_red_pm(&g).unwrap();
        assert_eq!(pm.size(), 0);
        assert_eq!(pm.red_count(), 0);
    }

    #[test]
    fn negative_weight_structures_are_handled() {
        // A triangle with a pendant forces the solver to leave the all-red
        // triangle edge out despite its being the heaviest cardinality path.
        let g = ColoredGraph::new(4, [(0, 1), (1, 2), (2, 0), (2, 3)], [(0, 1), (1, 2), (2, 0)]).unwrap();
        let pm = min_red_pm(&g).unwrap();
        assert_eq!(pm.red_count(), 1);
        assert!(pm.contains(Edge::new(0, 1)));
        assert!(pm.contains(Edge::new(2, 3)));
    }
}
