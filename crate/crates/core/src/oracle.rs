//! Brute-force Dempster combination over the explicit frame.
//!
//! Every vertex and edge evidence is a simple support function. Expanding the
//! product of all `n + n(n-1)/2` of them gives one term per activation subset
//! (each evidence contributes either its focus or `Θ`); the term's weight is the
//! product of the chosen masses and its focal set the intersection of the
//! chosen foci. Summing terms by focal set yields the unnormalised combined
//! mass function, with the empty-set mass being the conflict `k`. This is slow
//! (`O(2^(n^2/2))`) and only meant as ground truth for [`crate::fast`].

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{
    focus_of_edge_evidence, focus_of_vertex_evidence, CompletePath, EvidenceGraph, FrameSubset,
};

/// Default vertex cap for the oracle.
pub const MAX_ORACLE_N: usize = 6;

/// Conflict at or above this value is treated as total conflict.
pub const TOTAL_CONFLICT_THRESHOLD: f64 = 1.0 - 1e-12;

/// Unnormalised combined mass function: nonempty focal sets plus the mass that
/// fell on the empty set.
#[derive(Debug, Clone, PartialEq)]
pub struct MassTable {
    n: usize,
    entries: HashMap<FrameSubset, f64>,
    conflict: f64,
}

impl MassTable {
    /// All mass on `Θ`.
    pub fn vacuous(n: usize) -> Result<Self> {
        let mut entries = HashMap::new();
        entries.insert(FrameSubset::full(n)?, 1.0);
        Ok(Self {
            n,
            entries,
            conflict: 0.0,
        })
    }

    /// Simple support function: `mass` on `focus`, the rest on `Θ`.
    pub fn simple(focus: FrameSubset, mass: f64) -> Result<Self> {
        let n = focus.n();
        let mut table = Self {
            n,
            entries: HashMap::new(),
            conflict: 0.0,
        };
        table.add(FrameSubset::full(n)?, 1.0 - mass);
        table.add(focus, mass);
        Ok(table)
    }

    fn add(&mut self, set: FrameSubset, mass: f64) {
        if mass == 0.0 {
            return;
        }
        if set.is_empty() {
            self.conflict += mass;
        } else {
            *self.entries.entry(set).or_insert(0.0) += mass;
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Mass committed to the empty set.
    pub fn conflict(&self) -> f64 {
        self.conflict
    }

    pub fn entries(&self) -> impl Iterator<Item = (&FrameSubset, f64)> {
        self.entries.iter().map(|(s, &m)| (s, m))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Mass on exactly `set`.
    pub fn mass(&self, set: &FrameSubset) -> f64 {
        self.entries.get(set).copied().unwrap_or(0.0)
    }

    /// Sum of entry masses plus conflict; 1 up to rounding.
    pub fn total(&self) -> f64 {
        self.entries.values().sum::<f64>() + self.conflict
    }

    /// Unnormalised belief: mass of entries contained in `set`.
    pub fn belief(&self, set: &FrameSubset) -> f64 {
        self.entries
            .iter()
            .filter(|(s, _)| s.is_subset(set))
            .map(|(_, m)| m)
            .sum()
    }

    /// Unnormalised plausibility: mass of entries meeting `set`.
    pub fn plausibility(&self, set: &FrameSubset) -> f64 {
        self.entries
            .iter()
            .filter(|(s, _)| !s.intersection(set).is_empty())
            .map(|(_, m)| m)
            .sum()
    }

    /// Unnormalised conjunctive combination (Dempster's rule before dividing
    /// by `1 - k`).
    pub fn combine(&self, other: &MassTable) -> MassTable {
        assert_eq!(
            self.n, other.n,
            "combining mass tables over different frames"
        );
        let mut out = MassTable {
            n: self.n,
            entries: HashMap::new(),
            conflict: self.conflict + other.conflict - self.conflict * other.conflict,
        };
        for (a, ma) in &self.entries {
            for (b, mb) in &other.entries {
                out.add(a.intersection(b), ma * mb);
            }
        }
        out
    }
}

/// Support and plausibility of one frame element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathBelief {
    pub path: CompletePath,
    pub support_unnormalized: f64,
    pub support: f64,
    pub plausibility_unnormalized: f64,
    pub plausibility: f64,
}

impl PathBelief {
    pub fn normalized(
        path: CompletePath,
        support_unnormalized: f64,
        plausibility_unnormalized: f64,
        conflict: f64,
    ) -> Self {
        let scale = 1.0 / (1.0 - conflict);
        Self {
            path,
            support_unnormalized,
            support: support_unnormalized * scale,
            plausibility_unnormalized,
            plausibility: plausibility_unnormalized * scale,
        }
    }
}

/// Conflict plus per-path beliefs for every element of the frame, indexed by
/// path mask.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefReport {
    pub conflict: f64,
    pub paths: Vec<PathBelief>,
}

impl BeliefReport {
    pub fn get(&self, path: &CompletePath) -> &PathBelief {
        &self.paths[path.bits() as usize]
    }

    /// Largest absolute difference over `k` and every per-path quantity.
    pub fn max_abs_deviation(&self, other: &BeliefReport) -> f64 {
        assert_eq!(self.paths.len(), other.paths.len());
        self.paths
            .iter()
            .zip(&other.paths)
            .flat_map(|(a, b)| {
                [
                    (a.support_unnormalized - b.support_unnormalized).abs(),
                    (a.support - b.support).abs(),
                    (a.plausibility_unnormalized - b.plausibility_unnormalized).abs(),
                    (a.plausibility - b.plausibility).abs(),
                ]
            })
            .fold((self.conflict - other.conflict).abs(), f64::max)
    }
}

/// The graph's evidences as `(focus, mass)` pairs: vertices first, then edges
/// in row-major order.
pub fn simple_support_functions(g: &EvidenceGraph) -> Result<Vec<(FrameSubset, f64)>> {
    let mut out = Vec::with_capacity(g.n() + g.edge_count());
    for i in 0..g.n() {
        out.push((focus_of_vertex_evidence(g, i)?, g.p(i)));
    }
    for (i, j) in g.edges() {
        out.push((focus_of_edge_evidence(g, i, j)?, g.q(i, j)));
    }
    Ok(out)
}

/// [`oracle_combine_capped`] with the default cap.
pub fn oracle_combine(g: &EvidenceGraph) -> Result<MassTable> {
    oracle_combine_capped(g, MAX_ORACLE_N)
}

/// Combines every evidence of `g` by expanding all activation subsets.
pub fn oracle_combine_capped(g: &EvidenceGraph, cap: usize) -> Result<MassTable> {
    if g.n() > cap {
        return Err(Error::OracleInfeasible { n: g.n(), cap });
    }
    let evidences: Vec<(Vec<u64>, f64)> = simple_support_functions(g)?
        .into_iter()
        .map(|(s, m)| (s.words().to_vec(), m))
        .collect();
    let full = FrameSubset::full(g.n())?;
    let mut acc = Accumulator::default();
    acc.expand(&evidences, 0, full.words().to_vec(), 1.0);

    Ok(MassTable {
        n: g.n(),
        entries: acc
            .sums
            .into_iter()
            .map(|(w, m)| (FrameSubset::from_words(g.n(), w), m))
            .collect(),
        conflict: acc.conflict,
    })
}

#[derive(Default)]
struct Accumulator {
    sums: HashMap<Vec<u64>, f64>,
    conflict: f64,
}

impl Accumulator {
    fn expand(&mut self, evidences: &[(Vec<u64>, f64)], depth: usize, set: Vec<u64>, weight: f64) {
        if weight == 0.0 {
            return;
        }
        // Every completion of an empty intersection stays empty, and the
        // completions' weights sum to one.
        if set.iter().all(|&w| w == 0) {
            self.conflict += weight;
            return;
        }
        let Some((focus, mass)) = evidences.get(depth) else {
            match self.sums.get_mut(set.as_slice()) {
                Some(m) => *m += weight,
                None => {
                    self.sums.insert(set, weight);
                }
            }
            return;
        };
        let narrowed = set.iter().zip(focus).map(|(a, b)| a & b).collect();
        self.expand(evidences, depth + 1, narrowed, weight * mass);
        self.expand(evidences, depth + 1, set, weight * (1.0 - mass));
    }
}

/// Reads support, plausibility and conflict for every path off a combined
/// mass table.
pub fn oracle_report(t: &MassTable) -> Result<BeliefReport> {
    let k = t.conflict();
    if k >= TOTAL_CONFLICT_THRESHOLD {
        return Err(Error::TotalConflict);
    }
    let n = t.n();
    let mut paths = Vec::with_capacity(1 << n);
    for bits in 0..1u64 << n {
        let path = CompletePath::new(n, bits)?;
        let mut spt = 0.0;
        let mut pls = 0.0;
        for (set, m) in t.entries() {
            if set.contains(&path) {
                pls += m;
                if set.len() == 1 {
                    spt += m;
                }
            }
        }
        paths.push(PathBelief::normalized(path, spt, pls, k));
    }
    Ok(BeliefReport { conflict: k, paths })
}
