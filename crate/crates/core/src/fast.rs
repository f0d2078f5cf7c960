//! Direct evaluation of support, plausibility and conflict for one completely
//! specified path, without combining the evidences.
//!
//! Unnormalised plausibility is a closed product. Unnormalised support sums
//! over which internal path vertices have their own evidence true (`y`
//! assignments); the stated vertices cut the path into segments, and inside a
//! segment every route other than the path itself has to be blocked by edge
//! evidence. For the non-path vertices of a segment this is a further sum over
//! whether each one is reachable (`z` assignments), giving the `ξ` / `ψ`
//! factors. Conflict is accumulated edge by edge as `k_ij`, each one the
//! support of the direct step `v_i -> v_j` on the window `[i, j]` with `p_i`
//! rescaled by the conflict already collected before `v_i`.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{CompletePath, EvidenceGraph};
use crate::oracle::{BeliefReport, PathBelief, TOTAL_CONFLICT_THRESHOLD};

/// Default cap for full-frame enumeration in [`rank_paths`].
pub const MAX_RANK_N: usize = 24;

/// A contiguous vertex range `[lo, hi]` of a graph, optionally with one vertex
/// mass overridden.
#[derive(Clone, Copy)]
struct Window<'g> {
    g: &'g EvidenceGraph,
    lo: usize,
    hi: usize,
    p_override: Option<(usize, f64)>,
}

impl<'g> Window<'g> {
    fn whole(g: &'g EvidenceGraph) -> Self {
        Self {
            g,
            lo: 0,
            hi: g.n() - 1,
            p_override: None,
        }
    }

    #[inline]
    fn p(&self, i: usize) -> f64 {
        match self.p_override {
            Some((v, p)) if v == i => p,
            _ => self.g.p(i),
        }
    }

    #[inline]
    fn q(&self, i: usize, j: usize) -> f64 {
        self.g.q(i, j)
    }
}

/// Unnormalised plausibility: nothing that speaks against `s` is true.
pub fn pls_star(g: &EvidenceGraph, s: &CompletePath) -> f64 {
    let off: f64 = (0..g.n())
        .filter(|&i| !s.contains(i))
        .map(|i| 1.0 - g.p(i))
        .product();
    let path: Vec<usize> = s.vertices().collect();
    let edges: f64 = path.windows(2).map(|e| 1.0 - g.q(e[0], e[1])).product();
    off * edges
}

/// Unnormalised support. The empty path has none.
pub fn spt_star(g: &EvidenceGraph, s: &CompletePath) -> f64 {
    let path: Vec<usize> = s.vertices().collect();
    window_support(Window::whole(g), &path, None)
}

/// Unnormalised support of `path` (sorted vertex indices inside the window)
/// on the subgraph spanned by `w`. `omit` names one consecutive path edge
/// whose own evidence is left out of the combination.
fn window_support(w: Window<'_>, path: &[usize], omit: Option<(usize, usize)>) -> f64 {
    let Some((&first, &last)) = path.first().zip(path.last()) else {
        return 0.0;
    };
    let m = path.len();
    let mut on_path = 0u64;
    for &v in path {
        on_path |= 1 << v;
    }

    let mut fixed = w.p(first);
    if m > 1 {
        fixed *= w.p(last);
    }
    for v in w.lo..=w.hi {
        if on_path >> v & 1 == 0 {
            fixed *= 1.0 - w.p(v);
        }
    }
    // Nothing enters before the first vertex or leaves after the last.
    for j in w.lo..first {
        fixed *= w.q(j, first);
    }
    for j in last + 1..=w.hi {
        fixed *= w.q(last, j);
    }
    for e in path.windows(2) {
        if omit != Some((e[0], e[1])) {
            fixed *= 1.0 - w.q(e[0], e[1]);
        }
    }
    if fixed == 0.0 || m == 1 {
        return fixed;
    }

    let skips = SkipBlocks::new(w, path);
    let mut segments = vec![0.0; m * m];
    for a in 0..m {
        for b in a + 1..m {
            segments[a * m + b] = segment_factor(w, path, on_path, &skips, a, b);
        }
    }

    let internal = m - 2;
    let mut total = 0.0;
    for y in 0..1u64 << internal {
        let mut term = 1.0;
        let mut prev = 0;
        for k in 1..m - 1 {
            if y >> (k - 1) & 1 == 1 {
                term *= w.p(path[k]) * segments[prev * m + k];
                prev = k;
            } else {
                term *= 1.0 - w.p(path[k]);
            }
        }
        total += term * segments[prev * m + m - 1];
    }
    fixed * total
}

/// Products of doubts over every path edge that skips at least one path
/// vertex, for every run of path positions `a..=b`.
struct SkipBlocks {
    m: usize,
    table: Vec<f64>,
}

impl SkipBlocks {
    fn new(w: Window<'_>, path: &[usize]) -> Self {
        let m = path.len();
        let mut table = vec![1.0; m * m];
        for a in 0..m {
            for b in a + 2..m {
                let into_b: f64 = (a..b - 1).map(|x| w.q(path[x], path[b])).product();
                table[a * m + b] = table[a * m + b - 1] * into_b;
            }
        }
        Self { m, table }
    }

    fn get(&self, a: usize, b: usize) -> f64 {
        self.table[a * self.m + b]
    }
}

/// Weight of the edge evidence that makes the path run between stated
/// positions `a` and `b` the only route between them: every skipping edge
/// blocked, and every non-path vertex in between either unreachable or unable
/// to rejoin the run.
fn segment_factor(
    w: Window<'_>,
    path: &[usize],
    on_path: u64,
    skips: &SkipBlocks,
    a: usize,
    b: usize,
) -> f64 {
    let skip = skips.get(a, b);
    if skip == 0.0 {
        return 0.0;
    }
    let run = &path[a..=b];
    let outside: Vec<usize> = (run[0] + 1..run[run.len() - 1])
        .filter(|&t| on_path >> t & 1 == 0)
        .collect();
    if outside.is_empty() {
        return skip;
    }
    let from_run: Vec<f64> = outside
        .iter()
        .map(|&t| run.iter().filter(|&&u| u < t).map(|&u| w.q(u, t)).product())
        .collect();
    let to_run: Vec<f64> = outside
        .iter()
        .map(|&t| run.iter().filter(|&&v| v > t).map(|&v| w.q(t, v)).product())
        .collect();
    let mut reachable = Vec::with_capacity(outside.len());
    skip * reachability_sum(w, &outside, &from_run, &to_run, 0, &mut reachable)
}

/// Sum over reachable / unreachable assignments of the non-path vertices
/// `outside[idx..]`, given the reachable non-path vertices chosen so far.
fn reachability_sum(
    w: Window<'_>,
    outside: &[usize],
    from_run: &[f64],
    to_run: &[f64],
    idx: usize,
    reachable: &mut Vec<usize>,
) -> f64 {
    let Some(&t) = outside.get(idx) else {
        return 1.0;
    };
    let blocked_in: f64 = from_run[idx] * reachable.iter().map(|&u| w.q(u, t)).product::<f64>();
    let mut sum = 0.0;
    // ξ: every edge into t from a reachable vertex is blocked.
    if blocked_in != 0.0 {
        sum += blocked_in * reachability_sum(w, outside, from_run, to_run, idx + 1, reachable);
    }
    // ψ: t is reachable, so none of its edges may rejoin the run.
    let open = (1.0 - blocked_in) * to_run[idx];
    if open != 0.0 {
        reachable.push(t);
        sum += open * reachability_sum(w, outside, from_run, to_run, idx + 1, reachable);
        reachable.pop();
    }
    sum
}

/// Per-edge conflict contributions and their total.
#[derive(Debug, Clone, PartialEq)]
pub struct ConflictTable {
    n: usize,
    kij: Vec<f64>,
    k: f64,
    rescaled_p: Vec<f64>,
}

impl ConflictTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total conflict `k`.
    pub fn k(&self) -> f64 {
        self.k
    }

    /// Conflict added by the evidence against edge `i -> j`.
    pub fn kij(&self, i: usize, j: usize) -> f64 {
        assert!(i < j && j < self.n);
        self.kij[i * (2 * self.n - i - 1) / 2 + (j - i - 1)]
    }

    /// `(i, j, k_ij)` in row-major edge order.
    pub fn contributions(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .zip(&self.kij)
            .map(|((i, j), &k)| (i, j, k))
    }

    /// Vertex masses after removing the conflict already attributable to
    /// evidence before each vertex.
    pub fn rescaled_p(&self) -> &[f64] {
        &self.rescaled_p
    }

    pub fn is_total(&self) -> bool {
        self.k >= TOTAL_CONFLICT_THRESHOLD
    }

    /// Divides an unnormalised value by `1 - k`.
    pub fn normalize(&self, unnormalized: f64) -> Result<f64> {
        if self.is_total() {
            return Err(Error::TotalConflict);
        }
        let v = unnormalized / (1.0 - self.k);
        debug_assert!(v <= 1.0 + 1e-9, "normalised belief {v} exceeds 1");
        Ok(v)
    }
}

/// Conflict of the full combination.
pub fn conflict(g: &EvidenceGraph) -> ConflictTable {
    let n = g.n();
    let mut kij = vec![0.0; g.edge_count()];
    let mut rescaled_p = Vec::with_capacity(n);
    let idx = |i: usize, j: usize| i * (2 * n - i - 1) / 2 + (j - i - 1);
    for i in 0..n {
        // Conflict among vertices before i, and the part of it that needs v_i.
        let mut before = 0.0;
        let mut into = 0.0;
        for h in 1..i {
            for m in 0..h {
                before += kij[idx(m, h)];
            }
        }
        for m in 0..i {
            into += kij[idx(m, i)];
        }
        let p_i = g.p(i) * (1.0 - before) - into;
        rescaled_p.push(p_i);
        for j in i + 1..n {
            let q = g.q(i, j);
            if q == 0.0 {
                continue;
            }
            let w = Window {
                g,
                lo: i,
                hi: j,
                p_override: Some((i, p_i)),
            };
            kij[idx(i, j)] = q * window_support(w, &[i, j], Some((i, j)));
        }
    }
    let k = kij.iter().sum();
    ConflictTable {
        n,
        kij,
        k,
        rescaled_p,
    }
}

/// Normalised support of `s`.
pub fn support(g: &EvidenceGraph, s: &CompletePath) -> Result<f64> {
    conflict(g).normalize(spt_star(g, s))
}

/// Normalised plausibility of `s`.
pub fn plausibility(g: &EvidenceGraph, s: &CompletePath) -> Result<f64> {
    conflict(g).normalize(pls_star(g, s))
}

/// Both beliefs of `s`, reusing a conflict table computed once per graph.
pub fn path_belief(
    g: &EvidenceGraph,
    table: &ConflictTable,
    s: &CompletePath,
) -> Result<PathBelief> {
    if s.n() != g.n() {
        return Err(Error::PathLength {
            expected: g.n(),
            got: s.n(),
        });
    }
    if table.is_total() {
        return Err(Error::TotalConflict);
    }
    Ok(PathBelief::normalized(
        *s,
        spt_star(g, s),
        pls_star(g, s),
        table.k(),
    ))
}

/// Beliefs for every path, indexed by mask, in the same shape the oracle
/// produces.
pub fn evaluate_all(g: &EvidenceGraph) -> Result<BeliefReport> {
    let table = conflict(g);
    if table.is_total() {
        return Err(Error::TotalConflict);
    }
    let paths: Vec<CompletePath> = g.paths().collect();
    let paths = paths
        .par_iter()
        .map(|s| path_belief(g, &table, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(BeliefReport {
        conflict: table.k(),
        paths,
    })
}

/// Paths ordered by decreasing support.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub conflict: f64,
    pub paths: Vec<PathBelief>,
}

fn rank_order(a: &PathBelief, b: &PathBelief) -> Ordering {
    b.support
        .total_cmp(&a.support)
        .then(b.plausibility.total_cmp(&a.plausibility))
        .then(a.path.bits().cmp(&b.path.bits()))
}

/// [`rank_paths_capped`] with the default cap.
pub fn rank_paths(g: &EvidenceGraph, top_k: Option<usize>) -> Result<Ranking> {
    rank_paths_capped(g, top_k, MAX_RANK_N)
}

/// Evaluates all `2^n` paths and sorts them by support, then plausibility,
/// then mask.
pub fn rank_paths_capped(g: &EvidenceGraph, top_k: Option<usize>, cap: usize) -> Result<Ranking> {
    if g.n() > cap {
        return Err(Error::EnumerationCap { n: g.n(), cap });
    }
    let mut report = evaluate_all(g)?;
    report.paths.par_sort_by(rank_order);
    if let Some(k) = top_k {
        report.paths.truncate(k);
    }
    Ok(Ranking {
        conflict: report.conflict,
        paths: report.paths,
    })
}
