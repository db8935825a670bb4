//! Tukey depth and the cores `C^t_1(S)`.
//!
//! With `y_i = x_i - p`, the depth of `p` is the least number of `y_i` with
//! `u·y_i ≥ 0` over nonzero `u`. Points equal to `p` always count. For the
//! others the minimum is attained on an open cell of the central arrangement
//! `{u·y_i = 0}`, and every open cell touches a ray of the arrangement. At a
//! ray `u` the best adjacent cell counts `#{u·y_i > 0}` plus the same problem
//! one dimension down for the `y_i` orthogonal to `u`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, kernel_basis, span_basis, Mat, Vector};
use crate::points::{subsets_of_size, PointSet};
use crate::rational::Rat;
use crate::regions::{cell_feasible, CellRefutation, CellVerdict, CellWitness, ConvexCell};

/// Largest ambient dimension accepted by [`tukey_depth`].
pub const MAX_DEPTH_DIM: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DepthReport {
    pub point: Vector,
    pub depth: usize,
    /// The closed halfspace `{x : normal·x ≥ offset}` has `point` on its
    /// boundary and contains exactly `depth` points of the set.
    pub normal: Vector,
    pub offset: Rat,
}

impl DepthReport {
    /// Checks the witness halfspace; minimality is not re-derived.
    pub fn verify_witness(&self, s: &PointSet) -> bool {
        if self.normal.len() != s.dim() || linalg::is_zero(&self.normal) {
            return false;
        }
        let inside = s.points().iter().filter(|x| linalg::dot(&self.normal, x) >= self.offset).count();
        linalg::dot(&self.normal, &self.point) == self.offset && inside == self.depth
    }
}

/// Least strict count `#{u·y > 0}` over generic `u` in the span of `ys`
/// (all nonzero), with a generic optimal `u`.
fn min_open_cell(ys: &[Vector], dim: usize) -> (usize, Vector) {
    let (basis, _) = span_basis(ys, dim);
    let k = basis.len();
    if k == 1 {
        let b = &basis[0];
        let pos = ys.iter().filter(|y| linalg::dot(b, y).is_positive()).count();
        return if pos <= ys.len() - pos { (pos, b.clone()) } else { (ys.len() - pos, linalg::scale(b, &-Rat::one())) };
    }
    let mut best: Option<(usize, Vector)> = None;
    for sub in subsets_of_size(ys.len(), k - 1) {
        let chosen: Vec<&Vector> = sub.iter().map(|i| &ys[i]).collect();
        // u = Σ β_j b_j orthogonal to the chosen vectors
        let rows: Vec<Vector> = chosen.iter().map(|y| basis.iter().map(|b| linalg::dot(b, y)).collect()).collect();
        let ker = kernel_basis(&Mat::from_rows(rows));
        if ker.len() != 1 {
            continue;
        }
        let beta = &ker[0];
        let u = linalg::combination(dim, beta.iter().zip(basis.iter().map(|b| b.as_slice())));
        for u in [u.clone(), linalg::scale(&u, &-Rat::one())] {
            let pos = ys.iter().filter(|y| linalg::dot(&u, y).is_positive()).count();
            if best.as_ref().is_some_and(|(b, _)| pos >= *b) {
                continue;
            }
            let zs: Vec<Vector> = ys.iter().filter(|y| linalg::dot(&u, y).is_zero()).cloned().collect();
            let (inner, v) = min_open_cell(&zs, dim);
            let total = pos + inner;
            if best.as_ref().map_or(true, |(b, _)| total < *b) {
                best = Some((total, perturb(&u, &v, ys)));
            }
        }
    }
    best.expect("a spanning set has rays")
}

/// `u + εv` with `ε` small enough that no nonzero sign of `u·y` changes.
fn perturb(u: &[Rat], v: &[Rat], ys: &[Vector]) -> Vector {
    let mut min_u: Option<Rat> = None;
    let mut max_v = Rat::zero();
    for y in ys {
        let a = linalg::dot(u, y).abs();
        if !a.is_zero() && min_u.as_ref().map_or(true, |m| a < *m) {
            min_u = Some(a);
        }
        let b = linalg::dot(v, y).abs();
        if b > max_v {
            max_v = b;
        }
    }
    let eps = match min_u {
        Some(m) => &m / &(&(&max_v * &Rat::from(2)) + &Rat::one()),
        None => Rat::one(),
    };
    linalg::add(u, &linalg::scale(v, &eps))
}

/// Exact Tukey depth of `p` with closed halfspaces, for `d ≤ 3`.
pub fn tukey_depth(p: &[Rat], s: &PointSet) -> Result<DepthReport> {
    s.check_point(p)?;
    let d = s.dim();
    if d > MAX_DEPTH_DIM {
        return Err(Error::DimensionTooLarge { dim: d, max: MAX_DEPTH_DIM });
    }
    let ys: Vec<Vector> = s.points().iter().map(|x| linalg::sub(x, p)).collect();
    let at_p = ys.iter().filter(|y| linalg::is_zero(y)).count();
    let nonzero: Vec<Vector> = ys.into_iter().filter(|y| !linalg::is_zero(y)).collect();
    let (strict, normal) = if nonzero.is_empty() {
        let mut e = vec![Rat::zero(); d];
        e[0] = Rat::one();
        (0, e)
    } else {
        min_open_cell(&nonzero, d)
    };
    let offset = linalg::dot(&normal, p);
    Ok(DepthReport { point: p.to_vec(), depth: strict + at_p, normal, offset })
}

/// The cell whose hulls are all `(|S| - t)`-subsets; it equals `C^t_1(S)`.
pub fn centerpoint_cell(s: &PointSet, t: usize) -> Result<ConvexCell> {
    s.check_combinatorial()?;
    if t >= s.len() {
        return Err(Error::InvalidArgument("t must be smaller than the number of points".into()));
    }
    ConvexCell::new(subsets_of_size(s.len(), s.len() - t).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadoReport {
    pub t: usize,
    /// `|S| ≥ t(d + 1) + 1` for the ambient dimension `d`.
    pub bound_met: bool,
    pub witness: Option<CellWitness>,
    pub refutation: Option<CellRefutation>,
    /// Depth of the witness, when the dimension allows it.
    pub depth: Option<DepthReport>,
}

impl RadoReport {
    pub fn nonempty(&self) -> bool {
        self.witness.is_some()
    }
}

/// Decides whether `C^t_1(S)` is nonempty and measures the depth of the
/// witness found.
pub fn rado_check(s: &PointSet, t: usize) -> Result<RadoReport> {
    let cell = centerpoint_cell(s, t)?;
    let bound_met = s.len() > t * (s.dim() + 1);
    let (witness, refutation) = match cell_feasible(s, &cell)? {
        CellVerdict::Member(w) => (Some(w), None),
        CellVerdict::Empty(r) => (None, Some(r)),
    };
    let depth = match &witness {
        Some(w) if s.dim() <= MAX_DEPTH_DIM => Some(tukey_depth(&w.point, s)?),
        _ => None,
    };
    Ok(RadoReport { t, bound_met, witness, refutation, depth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::rational::rat;
    use crate::regions::{core_region, region_intervals_1d};
    use proptest::prelude::*;

    /// Closed-halfspace depth in the plane by brute force over directions
    /// perpendicular to point differences, nudged both ways.
    fn depth_2d_oracle(p: &[Rat], s: &PointSet) -> usize {
        let mut dirs: Vec<Vector> = vec![vec![Rat::one(), Rat::zero()], vec![Rat::zero(), Rat::one()]];
        for x in s.points() {
            let y = linalg::sub(x, p);
            if !linalg::is_zero(&y) {
                dirs.push(vec![-&y[1], y[0].clone()]);
            }
        }
        let count = |u: &[Rat]| s.points().iter().filter(|x| linalg::dot(u, &linalg::sub(x, p)) >= Rat::zero()).count();
        let mut best = usize::MAX;
        let small = rat(1, 1_000_000);
        for u in &dirs {
            for sign in [Rat::one(), -Rat::one()] {
                let u = linalg::scale(u, &sign);
                let perp = vec![-&u[1], u[0].clone()];
                for e in [Rat::zero(), small.clone(), -&small] {
                    let w = linalg::add(&u, &linalg::scale(&perp, &e));
                    best = best.min(count(&w));
                }
            }
        }
        best
    }

    #[test]
    fn depth_examples() {
        let one = PointSet::from_i64(2, &[&[1, 1]]).unwrap();
        assert_eq!(tukey_depth(&[Rat::one(), Rat::one()], &one).unwrap().depth, 1);
        let s = gallery::line(5);
        let r = tukey_depth(&[Rat::from(2)], &s).unwrap();
        assert_eq!(r.depth, 3);
        assert!(r.verify_witness(&s));
        assert_eq!(tukey_depth(&[Rat::zero()], &s).unwrap().depth, 1);
        assert_eq!(tukey_depth(&[Rat::from(9)], &s).unwrap().depth, 0);
        let four = PointSet::from_i64(4, &[&[0, 0, 0, 0]]).unwrap();
        assert!(matches!(tukey_depth(&vec![Rat::zero(); 4], &four), Err(Error::DimensionTooLarge { .. })));
    }

    #[test]
    fn centerpoint_examples() {
        let s = gallery::line(6);
        let c = centerpoint_cell(&s, 0).unwrap();
        assert_eq!(c.hulls, vec![s.all()]);
        let c = centerpoint_cell(&s, 2).unwrap();
        let reg = crate::regions::Region { cells: vec![c] };
        assert_eq!(region_intervals_1d(&s, &reg).unwrap(), vec![(Rat::from(2), Rat::from(3))]);
        assert!(!core_region(&s, 1, 2).unwrap().is_empty());
    }

    #[test]
    fn rado_examples() {
        assert!(rado_check(&gallery::line(4), 1).unwrap().nonempty());
        let three = rado_check(&gallery::line(3), 1).unwrap();
        assert!(three.nonempty() && three.bound_met);
        assert_eq!(three.witness.unwrap().point, vec![Rat::one()]);
        let two = rado_check(&gallery::line(2), 1).unwrap();
        assert!(!two.nonempty() && !two.bound_met);
        assert!(two.refutation.unwrap().verify(&gallery::line(2), &centerpoint_cell(&gallery::line(2), 1).unwrap()));
    }

    proptest! {
        #[test]
        fn planar_depth_matches_oracle(
            pts in proptest::collection::btree_set((-3i64..4, -3i64..4), 1..8),
            q in (-3i64..4, -3i64..4),
        ) {
            let pts: Vec<Vector> = pts.into_iter().map(|(a, b)| vec![Rat::from(a), Rat::from(b)]).collect();
            let s = PointSet::new(2, pts).unwrap();
            let p = vec![Rat::from(q.0), Rat::from(q.1)];
            let r = tukey_depth(&p, &s).unwrap();
            prop_assert!(r.verify_witness(&s));
            prop_assert_eq!(r.depth, depth_2d_oracle(&p, &s));
        }

        #[test]
        fn spatial_witness_is_consistent(
            pts in proptest::collection::btree_set((-2i64..3, -2i64..3, -2i64..3), 1..8),
            q in (-2i64..3, -2i64..3, -2i64..3),
        ) {
            let pts: Vec<Vector> = pts.into_iter().map(|(a, b, c)| vec![Rat::from(a), Rat::from(b), Rat::from(c)]).collect();
            let s = PointSet::new(3, pts).unwrap();
            let p = vec![Rat::from(q.0), Rat::from(q.1), Rat::from(q.2)];
            let r = tukey_depth(&p, &s).unwrap();
            prop_assert!(r.verify_witness(&s));
            // depth is at most the count on either side of any coordinate plane
            for k in 0..3 {
                let le = s.points().iter().filter(|x| x[k] <= p[k]).count();
                let ge = s.points().iter().filter(|x| x[k] >= p[k]).count();
                prop_assert!(r.depth <= le.min(ge));
            }
        }
    }
}
