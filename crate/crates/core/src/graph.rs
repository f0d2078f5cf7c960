//! The evidence graph and the path encodings used to talk about its frame.
//!
//! Vertices are totally ordered and every ordered pair `i < j` carries an edge,
//! so the frame of discernment is the set of all `2^n` vertex subsets, each
//! read as the path visiting those vertices in increasing order. Library
//! indices are zero-based: the literature's `v_1` is vertex `0` and maps to bit
//! `0` of a [`CompletePath`] mask.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest graph a [`CompletePath`] mask can address.
pub const MAX_VERTICES: usize = 63;

/// Largest frame that may be materialised as an explicit [`FrameSubset`].
pub const MAX_FRAME_VERTICES: usize = 24;

/// A complete DAG carrying one simple support function per vertex (mass `p_i`
/// for "v_i is on the path") and one per edge (mass `q_ij` against a direct
/// transition from `v_i` to `v_j`).
#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceGraph {
    p: Vec<f64>,
    // Row-major strict upper triangle: q01, q02, .., q0(n-1), q12, ..
    q: Vec<f64>,
}

fn check_unit(what: impl FnOnce() -> String, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfUnitRange {
            what: what(),
            value,
        })
    }
}

#[inline]
fn tri_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl EvidenceGraph {
    /// Builds a graph from vertex masses and the row-major strict upper
    /// triangle of edge doubts.
    pub fn new(p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        let n = p.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                n,
                max: MAX_VERTICES,
            });
        }
        let expected = n * (n - 1) / 2;
        if q.len() != expected {
            return Err(Error::EdgeCount {
                expected,
                got: q.len(),
            });
        }
        for (i, &v) in p.iter().enumerate() {
            check_unit(|| format!("p[{}]", i + 1), v)?;
        }
        let g = Self { p, q };
        for (i, j) in g.edges() {
            check_unit(|| format!("q[{},{}]", i + 1, j + 1), g.q(i, j))?;
        }
        Ok(g)
    }

    /// Builds a graph by evaluating `q(i, j)` for every edge `i < j`.
    pub fn from_fn(p: Vec<f64>, mut q: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let n = p.len();
        let mut doubts = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                doubts.push(q(i, j));
            }
        }
        Self::new(p, doubts)
    }

    /// Every vertex gets mass `p`, every edge doubt `q`.
    pub fn uniform(n: usize, p: f64, q: f64) -> Result<Self> {
        Self::from_fn(vec![p; n], |_, _| q)
    }

    /// Draws every mass uniformly from `[lo, hi)`.
    pub fn random<R: Rng + ?Sized>(n: usize, lo: f64, hi: f64, rng: &mut R) -> Result<Self> {
        let p = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
        Self::from_fn(p, |_, _| rng.gen_range(lo..hi))
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    /// Mass of the evidence for vertex `i`.
    #[inline]
    pub fn p(&self, i: usize) -> f64 {
        self.p[i]
    }

    /// Doubt against the direct transition `i -> j`; requires `i < j`.
    #[inline]
    pub fn q(&self, i: usize, j: usize) -> f64 {
        self.q[tri_index(self.n(), i, j)]
    }

    pub fn vertex_masses(&self) -> &[f64] {
        &self.p
    }

    /// Edges in row-major order, `(0,1), (0,2), .., (1,2), ..`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.q.len()
    }

    pub fn check_vertex(&self, i: usize) -> Result<()> {
        if i < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                index: i,
                n: self.n(),
            })
        }
    }

    pub fn check_edge(&self, i: usize, j: usize) -> Result<()> {
        if i < j && j < self.n() {
            Ok(())
        } else {
            Err(Error::InvalidEdge {
                from: i,
                to: j,
                n: self.n(),
            })
        }
    }

    /// Copy with vertex mass `p_i` replaced.
    pub fn with_p(&self, i: usize, value: f64) -> Result<Self> {
        self.check_vertex(i)?;
        check_unit(|| format!("p[{}]", i + 1), value)?;
        let mut g = self.clone();
        g.p[i] = value;
        Ok(g)
    }

    /// Copy with edge doubt `q_ij` replaced.
    pub fn with_q(&self, i: usize, j: usize, value: f64) -> Result<Self> {
        self.check_edge(i, j)?;
        check_unit(|| format!("q[{},{}]", i + 1, j + 1), value)?;
        let mut g = self.clone();
        let idx = tri_index(self.n(), i, j);
        g.q[idx] = value;
        Ok(g)
    }

    /// All `2^n` frame elements in mask order.
    pub fn paths(&self) -> impl Iterator<Item = CompletePath> {
        let n = self.n();
        (0..1u64 << n).map(move |bits| CompletePath { n, bits })
    }
}

/// One element of the frame: every vertex is either on the path or off it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompletePath {
    n: usize,
    bits: u64,
}

impl CompletePath {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                n,
                max: MAX_VERTICES,
            });
        }
        if bits >> n != 0 {
            return Err(Error::VertexOutOfRange {
                index: 63 - bits.leading_zeros() as usize,
                n,
            });
        }
        Ok(Self { n, bits })
    }

    pub fn from_vertices(n: usize, vertices: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &v in vertices {
            if v >= n {
                return Err(Error::VertexOutOfRange { index: v, n });
            }
            bits |= 1 << v;
        }
        Self::new(n, bits)
    }

    /// The path visiting every vertex.
    pub fn full(n: usize) -> Self {
        Self {
            n,
            bits: if n == 0 { 0 } else { u64::MAX >> (64 - n) },
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// First vertex on the path.
    pub fn first(&self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize)
    }

    /// Last vertex on the path.
    pub fn last(&self) -> Option<usize> {
        (self.bits != 0).then(|| 63 - self.bits.leading_zeros() as usize)
    }

    /// Path vertices in increasing order.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.contains(i))
    }

    /// Path vertices strictly between the first and the last.
    pub fn internal_vertices(&self) -> Vec<usize> {
        let v: Vec<usize> = self.vertices().collect();
        if v.len() <= 2 {
            Vec::new()
        } else {
            v[1..v.len() - 1].to_vec()
        }
    }
}

impl fmt::Display for CompletePath {
    /// Bit string with `v_1` leftmost.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(if self.contains(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for CompletePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        let mut n = 0;
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => bits |= 1u64.checked_shl(i as u32).unwrap_or(0),
                '0' => {}
                other => return Err(Error::PathSyntax(other)),
            }
            n = i + 1;
        }
        Self::new(n, bits)
    }
}

/// One coordinate of an incompletely specified path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trit {
    /// `r_i`: the vertex is on the path.
    On,
    /// `¬r_i`: the vertex is off the path.
    Off,
    /// `θ_i`: either.
    Any,
}

/// A path pattern that may leave vertices unspecified.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TritPattern {
    trits: Vec<Trit>,
}

impl TritPattern {
    pub fn new(trits: Vec<Trit>) -> Self {
        Self { trits }
    }

    /// The all-`θ` pattern, i.e. the whole frame.
    pub fn any(n: usize) -> Self {
        Self {
            trits: vec![Trit::Any; n],
        }
    }

    /// Sets coordinate `i`, builder style.
    pub fn with(mut self, i: usize, t: Trit) -> Self {
        self.trits[i] = t;
        self
    }

    pub fn n(&self) -> usize {
        self.trits.len()
    }

    pub fn trits(&self) -> &[Trit] {
        &self.trits
    }

    /// A path matches when it agrees on every specified coordinate.
    pub fn matches(&self, path: &CompletePath) -> bool {
        self.trits.iter().enumerate().all(|(i, t)| match t {
            Trit::Any => true,
            Trit::On => path.contains(i),
            Trit::Off => !path.contains(i),
        })
    }

    /// `Some` when no coordinate is `θ`.
    pub fn to_complete_path(&self) -> Option<CompletePath> {
        let mut bits = 0u64;
        for (i, t) in self.trits.iter().enumerate() {
            match t {
                Trit::On => bits |= 1 << i,
                Trit::Off => {}
                Trit::Any => return None,
            }
        }
        Some(CompletePath { n: self.n(), bits })
    }
}

impl From<CompletePath> for TritPattern {
    fn from(path: CompletePath) -> Self {
        Self {
            trits: (0..path.n())
                .map(|i| {
                    if path.contains(i) {
                        Trit::On
                    } else {
                        Trit::Off
                    }
                })
                .collect(),
        }
    }
}

/// An explicit subset of the `2^n` frame elements, one bit per path mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrameSubset {
    n: usize,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    (1usize << n).div_ceil(64)
}

impl FrameSubset {
    fn check_size(n: usize) -> Result<()> {
        if n > MAX_FRAME_VERTICES {
            Err(Error::TooManyVertices {
                n,
                max: MAX_FRAME_VERTICES,
            })
        } else {
            Ok(())
        }
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::check_size(n)?;
        Ok(Self {
            n,
            words: vec![0; word_count(n)],
        })
    }

    /// The whole frame `Θ`.
    pub fn full(n: usize) -> Result<Self> {
        let mut s = Self::empty(n)?;
        let size = 1usize << n;
        for (w, word) in s.words.iter_mut().enumerate() {
            let remaining = size - w * 64;
            *word = if remaining >= 64 {
                u64::MAX
            } else {
                (1u64 << remaining) - 1
            };
        }
        Ok(s)
    }

    /// Collects every path satisfying `pred`.
    pub fn from_predicate(n: usize, mut pred: impl FnMut(CompletePath) -> bool) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for bits in 0..1u64 << n {
            if pred(CompletePath { n, bits }) {
                s.insert_bits(bits);
            }
        }
        Ok(s)
    }

    /// The union of the match sets of a disjunction of patterns.
    pub fn from_patterns(n: usize, patterns: &[TritPattern]) -> Result<Self> {
        Self::from_predicate(n, |c| patterns.iter().any(|z| z.matches(&c)))
    }

    pub fn singleton(path: CompletePath) -> Result<Self> {
        let mut s = Self::empty(path.n())?;
        s.insert_bits(path.bits());
        Ok(s)
    }

    pub(crate) fn from_words(n: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), word_count(n));
        Self { n, words }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    fn insert_bits(&mut self, bits: u64) {
        self.words[(bits / 64) as usize] |= 1 << (bits % 64);
    }

    pub fn insert(&mut self, path: CompletePath) {
        self.insert_bits(path.bits());
    }

    pub fn contains(&self, path: &CompletePath) -> bool {
        let bits = path.bits();
        self.words[(bits / 64) as usize] >> (bits % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn complement(&self) -> Self {
        let full = Self::full(self.n).expect("size already validated");
        Self {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&full.words)
                .map(|(a, f)| !a & f)
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Member paths in mask order.
    pub fn iter(&self) -> impl Iterator<Item = CompletePath> + '_ {
        let n = self.n;
        (0..1u64 << n)
            .filter(move |&bits| self.words[(bits / 64) as usize] >> (bits % 64) & 1 == 1)
            .map(move |bits| CompletePath { n, bits })
    }
}

/// Focus of the evidence for vertex `i`: every path through `v_i`.
pub fn focus_of_vertex_evidence(g: &EvidenceGraph, i: usize) -> Result<FrameSubset> {
    g.check_vertex(i)?;
    let n = g.n();
    FrameSubset::from_patterns(n, &[TritPattern::any(n).with(i, Trit::On)])
}

/// The pattern disjunction describing the focus of the evidence against edge
/// `i -> j`: `v_i` off, or `v_j` off, or some vertex strictly between them on.
pub fn edge_focus_patterns(n: usize, i: usize, j: usize) -> Vec<TritPattern> {
    let mut patterns = vec![
        TritPattern::any(n).with(i, Trit::Off),
        TritPattern::any(n).with(j, Trit::Off),
    ];
    patterns.extend((i + 1..j).map(|k| TritPattern::any(n).with(k, Trit::On)));
    patterns
}

/// Focus of the evidence against edge `i -> j`: every path that does not step
/// directly from `v_i` to `v_j`.
pub fn focus_of_edge_evidence(g: &EvidenceGraph, i: usize, j: usize) -> Result<FrameSubset> {
    g.check_edge(i, j)?;
    FrameSubset::from_patterns(g.n(), &edge_focus_patterns(g.n(), i, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(s: &str) -> CompletePath {
        s.parse().unwrap()
    }

    fn set(n: usize, paths: &[&str]) -> FrameSubset {
        let mut s = FrameSubset::empty(n).unwrap();
        for p in paths {
            s.insert(path(p));
        }
        s
    }

    #[test]
    fn vertex_focus_two_vertices() {
        let g = EvidenceGraph::uniform(2, 0.5, 0.5).unwrap();
        assert_eq!(
            focus_of_vertex_evidence(&g, 0).unwrap(),
            set(2, &["11", "10"])
        );
    }

    #[test]
    fn vertex_focus_single_vertex() {
        let g = EvidenceGraph::uniform(1, 0.5, 0.5).unwrap();
        assert_eq!(focus_of_vertex_evidence(&g, 0).unwrap(), set(1, &["1"]));
    }

    #[test]
    fn vertex_focus_middle_of_three() {
        let g = EvidenceGraph::uniform(3, 0.5, 0.5).unwrap();
        let expected: Vec<String> = (0..8u64)
            .map(|b| CompletePath::new(3, b).unwrap())
            .filter(|c| c.contains(1))
            .map(|c| c.to_string())
            .collect();
        let expected: Vec<&str> = expected.iter().map(String::as_str).collect();
        let focus = focus_of_vertex_evidence(&g, 1).unwrap();
        assert_eq!(focus.len(), 4);
        assert_eq!(focus, set(3, &expected));
    }

    #[test]
    fn vertex_focus_out_of_range() {
        let g = EvidenceGraph::uniform(2, 0.5, 0.5).unwrap();
        assert_eq!(
            focus_of_vertex_evidence(&g, 2),
            Err(Error::VertexOutOfRange { index: 2, n: 2 })
        );
    }

    #[test]
    fn edge_focus_two_vertices_excludes_only_full_path() {
        let g = EvidenceGraph::uniform(2, 0.5, 0.5).unwrap();
        let f = focus_of_edge_evidence(&g, 0, 1).unwrap();
        assert_eq!(f, set(2, &["00", "10", "01"]));
        assert_eq!(f.complement(), FrameSubset::singleton(path("11")).unwrap());
    }

    #[test]
    fn edge_focus_skip_edge_of_three() {
        let g = EvidenceGraph::uniform(3, 0.5, 0.5).unwrap();
        let f = focus_of_edge_evidence(&g, 0, 2).unwrap();
        assert_eq!(f.len(), 7);
        assert!(!f.contains(&path("101")));
    }

    #[test]
    fn edge_focus_first_edge_of_three() {
        let g = EvidenceGraph::uniform(3, 0.5, 0.5).unwrap();
        let f = focus_of_edge_evidence(&g, 0, 1).unwrap();
        assert_eq!(f.len(), 6);
        assert!(!f.contains(&path("110")));
        assert!(!f.contains(&path("111")));
    }

    #[test]
    fn edge_focus_rejects_reversed_edge() {
        let g = EvidenceGraph::uniform(3, 0.5, 0.5).unwrap();
        assert!(matches!(
            focus_of_edge_evidence(&g, 2, 1),
            Err(Error::InvalidEdge { .. })
        ));
        assert!(focus_of_edge_evidence(&g, 1, 1).is_err());
    }

    #[test]
    fn edge_focus_is_complement_of_direct_transition() {
        for n in 2..=5 {
            let g = EvidenceGraph::uniform(n, 0.5, 0.5).unwrap();
            for (i, j) in g.edges() {
                let vi = focus_of_vertex_evidence(&g, i).unwrap();
                let vj = focus_of_vertex_evidence(&g, j).unwrap();
                let gap =
                    FrameSubset::from_predicate(n, |c| (i + 1..j).all(|k| !c.contains(k))).unwrap();
                let direct = vi.intersection(&vj).intersection(&gap);
                assert_eq!(
                    focus_of_edge_evidence(&g, i, j).unwrap(),
                    direct.complement()
                );
            }
        }
    }

    #[test]
    fn pattern_membership_is_exhaustively_consistent() {
        const TRITS: [Trit; 3] = [Trit::On, Trit::Off, Trit::Any];
        for n in 1..=4usize {
            for code in 0..3usize.pow(n as u32) {
                let mut c = code;
                let trits = (0..n)
                    .map(|_| {
                        let t = TRITS[c % 3];
                        c /= 3;
                        t
                    })
                    .collect();
                let z = TritPattern::new(trits);
                let subset = FrameSubset::from_patterns(n, std::slice::from_ref(&z)).unwrap();
                for bits in 0..1u64 << n {
                    let x = CompletePath::new(n, bits).unwrap();
                    let rule = z.trits().iter().enumerate().all(|(i, t)| match t {
                        Trit::Any => true,
                        Trit::On => x.contains(i),
                        Trit::Off => !x.contains(i),
                    });
                    assert_eq!(subset.contains(&x), rule);
                }
                if let Some(c) = z.to_complete_path() {
                    assert_eq!(TritPattern::from(c), z);
                    assert_eq!(subset, FrameSubset::singleton(c).unwrap());
                }
            }
        }
    }

    #[test]
    fn path_accessors() {
        let s = path("10110");
        assert_eq!(s.first(), Some(0));
        assert_eq!(s.last(), Some(3));
        assert_eq!(s.internal_vertices(), vec![2]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_string(), "10110");
        let e = path("000");
        assert_eq!(e.first(), None);
        assert!(e.internal_vertices().is_empty());
        assert_eq!(path("0100").first(), path("0100").last());
    }

    #[test]
    fn path_parse_errors() {
        assert_eq!("10x".parse::<CompletePath>(), Err(Error::PathSyntax('x')));
    }

    #[test]
    fn graph_validation() {
        assert_eq!(EvidenceGraph::new(vec![], vec![]), Err(Error::EmptyGraph));
        assert!(matches!(
            EvidenceGraph::new(vec![0.5, 1.5], vec![0.1]),
            Err(Error::OutOfUnitRange { .. })
        ));
        assert!(matches!(
            EvidenceGraph::new(vec![0.5, 0.5], vec![-0.1]),
            Err(Error::OutOfUnitRange { .. })
        ));
        assert!(matches!(
            EvidenceGraph::new(vec![0.5, 0.5], vec![]),
            Err(Error::EdgeCount { .. })
        ));
        let g =
            EvidenceGraph::from_fn(vec![0.1, 0.2, 0.3, 0.4], |i, j| (10 * i + j) as f64 / 100.0)
                .unwrap();
        for (i, j) in g.edges() {
            assert_eq!(g.q(i, j), (10 * i + j) as f64 / 100.0);
        }
        let h = g.with_q(1, 3, 0.9).unwrap();
        assert_eq!(h.q(1, 3), 0.9);
        assert_eq!(h.q(1, 2), g.q(1, 2));
    }
}
