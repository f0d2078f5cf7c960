//! Hand-expanded closed forms for small fixed graphs, written out term by term
//! so they share no code with the library's evaluation path.

#![allow(dead_code)]

use pathbelief::EvidenceGraph;

/// One-based accessors to keep the formulas readable.
pub struct Params<'a>(pub &'a EvidenceGraph);

impl Params<'_> {
    pub fn p(&self, i: usize) -> f64 {
        self.0.p(i - 1)
    }
    pub fn q(&self, i: usize, j: usize) -> f64 {
        self.0.q(i - 1, j - 1)
    }
}

/// Conflict of a three-vertex graph.
pub fn conflict_three(g: &EvidenceGraph) -> f64 {
    let x = Params(g);
    let (p1, p2, p3) = (x.p(1), x.p(2), x.p(3));
    let (q12, q13, q23) = (x.q(1, 2), x.q(1, 3), x.q(2, 3));
    p1 * p2 * q12 + p1 * (1.0 - p2) * p3 * (q12 * q13 + q13 * q23 - q12 * q13 * q23) + p2 * p3 * q23
        - p1 * p2 * p3 * q12 * q23
}

/// Normalised support of <r1, ¬r2, r3>.
pub fn support_101(g: &EvidenceGraph) -> f64 {
    let x = Params(g);
    let k = conflict_three(g);
    x.p(1)
        * (1.0 - x.p(2))
        * x.p(3)
        * (1.0 - x.q(1, 3))
        * (x.q(1, 2) + (1.0 - x.q(1, 2)) * x.q(2, 3))
        / (1.0 - k)
}

/// Normalised plausibility of <r1, ¬r2, r3>.
pub fn plausibility_101(g: &EvidenceGraph) -> f64 {
    let x = Params(g);
    (1.0 - x.p(2)) * (1.0 - x.q(1, 3)) / (1.0 - conflict_three(g))
}

/// Unnormalised support of <r1, ¬r2, r3, r4, ¬r5>.
pub fn spt_star_10110(g: &EvidenceGraph) -> f64 {
    let x = Params(g);
    let (p1, p2, p3, p4, p5) = (x.p(1), x.p(2), x.p(3), x.p(4), x.p(5));
    let q = |i, j| x.q(i, j);
    p1 * (1.0 - p2)
        * p4
        * (1.0 - p5)
        * (1.0 - q(1, 3))
        * (1.0 - q(3, 4))
        * q(4, 5)
        * (p3 * (q(1, 2) + (1.0 - q(1, 2)) * q(2, 3))
            + (1.0 - p3) * q(1, 4) * (q(1, 2) + (1.0 - q(1, 2)) * q(2, 3) * q(2, 4)))
}

/// Unnormalised plausibility of <r1, ¬r2, r3, r4, ¬r5>.
pub fn pls_star_10110(g: &EvidenceGraph) -> f64 {
    let x = Params(g);
    (1.0 - x.p(2)) * (1.0 - x.p(5)) * (1.0 - x.q(1, 3)) * (1.0 - x.q(3, 4))
}

/// Unnormalised support of the path holding only vertex `i` (zero-based).
pub fn spt_star_single(g: &EvidenceGraph, i: usize) -> f64 {
    let mut v = g.p(i);
    for j in 0..g.n() {
        if j < i {
            v *= g.q(j, i);
        }
        if j > i {
            v *= g.q(i, j);
        }
        if j != i {
            v *= 1.0 - g.p(j);
        }
    }
    v
}
