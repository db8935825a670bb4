//! Halfspace descriptions of hulls of a few ground points.
//!
//! Facets are found by brute force: inside the affine hull of the points,
//! every hyperplane through `k` affinely independent points that leaves all
//! points on one side is a supporting hyperplane. This is only meant for the
//! small hulls that appear in Tverberg cells.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{self, kernel_basis, span_basis, Mat, Vector};
use crate::points::{subsets_of_size, IndexSet, PointSet};
use crate::rational::Rat;

/// `normal · x ≤ offset`, or `normal · x = offset` when `equality` is set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Constraint {
    pub normal: Vector,
    pub offset: Rat,
    pub equality: bool,
}

impl Constraint {
    pub fn holds(&self, x: &[Rat]) -> bool {
        let v = linalg::dot(&self.normal, x);
        if self.equality {
            v == self.offset
        } else {
            v <= self.offset
        }
    }
}

/// Equalities of the affine hull followed by facet inequalities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfspaceRep {
    pub dim: usize,
    pub constraints: Vec<Constraint>,
}

impl HalfspaceRep {
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.constraints.iter().all(|c| c.holds(x))
    }
}

/// Scales so the first nonzero entry has absolute value one.
fn canonical(normal: Vector, offset: Rat) -> (Vector, Rat) {
    match normal.iter().find(|v| !v.is_zero()) {
        Some(lead) => {
            let s = lead.abs().recip();
            (linalg::scale(&normal, &s), &offset * &s)
        }
        None => (normal, offset),
    }
}

/// Halfspace description of `conv{x_i : i ∈ indices}`; `indices` nonempty.
pub fn hull_halfspaces(s: &PointSet, indices: IndexSet) -> HalfspaceRep {
    assert!(!indices.is_empty(), "hull of no points");
    let d = s.dim();
    let idx: Vec<usize> = indices.iter().collect();
    let p0 = s.point(idx[0]).to_vec();
    let dirs: Vec<Vector> = idx[1..].iter().map(|&i| linalg::sub(s.point(i), &p0)).collect();
    let (basis, pivots) = span_basis(&dirs, d);
    let k = pivots.len();
    let mut constraints = Vec::new();

    let normals = if k == 0 { Mat::identity(d).rows_vec() } else { kernel_basis(&Mat::from_rows(basis)) };
    for n in normals {
        let off = linalg::dot(&n, &p0);
        let (n, off) = canonical(n, off);
        constraints.push(Constraint { normal: n, offset: off, equality: true });
    }
    if k == 0 {
        return HalfspaceRep { dim: d, constraints };
    }

    // Chart coordinates inside the affine hull: pivot entries of x - p0.
    let ys: Vec<Vector> = idx.iter().map(|&i| pivots.iter().map(|&c| &s.point(i)[c] - &p0[c]).collect()).collect();
    let mut facets: BTreeSet<(Vector, Rat)> = BTreeSet::new();
    for sub in subsets_of_size(ys.len(), k) {
        let members: Vec<usize> = sub.iter().collect();
        let base = &ys[members[0]];
        let chart_normal = if k == 1 {
            vec![Rat::one()]
        } else {
            let diffs: Vec<Vector> = members[1..].iter().map(|&m| linalg::sub(&ys[m], base)).collect();
            let ker = kernel_basis(&Mat::from_rows(diffs));
            if ker.len() != 1 {
                continue;
            }
            ker.into_iter().next().unwrap()
        };
        let beta = linalg::dot(&chart_normal, base);
        let mut pos = false;
        let mut neg = false;
        for y in &ys {
            match linalg::dot(&chart_normal, y).cmp(&beta) {
                core::cmp::Ordering::Greater => pos = true,
                core::cmp::Ordering::Less => neg = true,
                core::cmp::Ordering::Equal => {}
            }
        }
        let (cn, cb) = match (pos, neg) {
            (true, true) | (false, false) => continue,
            (false, true) => (chart_normal, beta),
            (true, false) => (linalg::scale(&chart_normal, &-Rat::one()), -beta),
        };
        // lift: n·y ≤ β with y = P(x - p0)  ⇒  a·x ≤ β + a·p0
        let mut a = vec![Rat::zero(); d];
        for (j, &c) in pivots.iter().enumerate() {
            a[c] = cn[j].clone();
        }
        let off = &cb + &linalg::dot(&a, &p0);
        facets.insert(canonical(a, off));
    }
    constraints.extend(facets.into_iter().map(|(normal, offset)| Constraint { normal, offset, equality: false }));
    HalfspaceRep { dim: d, constraints }
}

impl Mat {
    fn rows_vec(&self) -> Vec<Vector> {
        (0..self.rows()).map(|i| self.row(i).to_vec()).collect()
    }
}
