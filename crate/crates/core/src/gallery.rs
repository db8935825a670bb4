//! Canonical example configurations.
//!
//! Every constructor is deterministic: the same call always produces the same
//! coordinates in the same order.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::points::{IndexSet, PointSet};
use crate::rational::Rat;

/// Ten points in `R^5`: `e_1..e_5` (indices 0..5) followed by
/// `f_i = -e_i - e_{i+2}` with indices mod 5 (indices 5..10).
pub fn paper_counterexample() -> PointSet {
    let mut pts = Vec::with_capacity(10);
    for i in 0..5 {
        let mut e = vec![Rat::zero(); 5];
        e[i] = Rat::one();
        pts.push(e);
    }
    for i in 0..5 {
        let mut f = vec![Rat::zero(); 5];
        f[i] = -Rat::one();
        f[(i + 2) % 5] = -Rat::one();
        pts.push(f);
    }
    PointSet::new(5, pts).expect("distinct points")
}

/// `X_i = {e_i, e_{i+2}, f_i}` for `i = 1..=5` (indices mod 5).
pub fn counterexample_block(i: usize) -> IndexSet {
    assert!((1..=5).contains(&i), "block index out of range");
    let k = i - 1;
    IndexSet::from_iter([k, (k + 2) % 5, 5 + k])
}

/// Set-level flip sequence from `(X_1, X_2)` to `(X_2, X_1)` as pairs of block
/// lists; each side is the union of the listed blocks.
pub fn counterexample_flip_sequence() -> Vec<(IndexSet, IndexSet)> {
    let x = counterexample_block;
    vec![
        (x(1), x(2)),
        (x(1).union(x(3)), x(2)),
        (x(3), x(2)),
        (x(3), x(2).union(x(4))),
        (x(3), x(4)),
        (x(3).union(x(5)), x(4)),
        (x(5), x(4)),
        (x(5), x(4).union(x(1))),
        (x(5), x(1)),
        (x(5).union(x(2)), x(1)),
        (x(2), x(1)),
    ]
}

/// `(±1, 0), (0, ±1), (0, 0)`.
pub fn cross() -> PointSet {
    PointSet::from_i64(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1], &[0, 0]]).expect("distinct points")
}

/// The integers `0..n` on the real line.
pub fn line(n: usize) -> PointSet {
    let vals: Vec<Rat> = (0..n).map(Rat::from).collect();
    PointSet::on_line(&vals).expect("distinct points")
}

/// A configuration with a unique Radon point, meant for the `(t+2)`-partition
/// construction with the recorded `t`.
#[derive(Clone, Debug)]
pub struct CascadeInstance {
    pub name: String,
    pub points: PointSet,
    pub t: usize,
}

fn instance(name: &str, dim: usize, pts: &[&[i64]], t: usize) -> CascadeInstance {
    CascadeInstance { name: String::from(name), points: PointSet::from_i64(dim, pts).expect("distinct points"), t }
}

/// Hand-built instances with `|S| = a + t + 2` and a unique Radon point.
///
/// With `t = 0` the dependence space is a line, so there is a single block and
/// the construction splits it by sign. With `t ≥ 1` every instance is a direct
/// sum of simplices around the origin plus the origin itself, which gives
/// `t + 2` blocks.
pub fn curated_cascade() -> Vec<CascadeInstance> {
    vec![
        CascadeInstance { name: String::from("cross"), points: cross(), t: 1 },
        instance(
            "star-3d",
            3,
            &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1], &[0, 0, 0]],
            2,
        ),
        instance(
            "triangle-segment",
            3,
            &[&[-1, -1, 0], &[2, -1, 0], &[-1, 2, 0], &[0, 0, 1], &[0, 0, -1], &[0, 0, 0]],
            1,
        ),
        instance("cross-with-apex", 3, &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 0], &[3, 2, 5]], 1),
        instance("segment-midpoint", 1, &[&[0], &[2], &[1]], 0),
        instance("triangle-interior", 2, &[&[0, 0], &[3, 0], &[0, 3], &[1, 1]], 0),
        instance("convex-quadrilateral", 2, &[&[0, 0], &[4, 1], &[5, 5], &[1, 3]], 0),
        instance("simplex-barycenter", 3, &[&[0, 0, 0], &[4, 0, 0], &[0, 4, 0], &[0, 0, 4], &[1, 1, 1]], 0),
    ]
}

/// Instance `k` (1-based) of [`curated_cascade`].
pub fn curated_cascade_instance(k: usize) -> Option<CascadeInstance> {
    curated_cascade().into_iter().nth(k.checked_sub(1)?)
}

/// Names accepted by [`by_name`].
pub fn names() -> Vec<String> {
    let mut v = vec![String::from("paper-counterexample"), String::from("cross"), String::from("line-n")];
    v.extend((1..=curated_cascade().len()).map(|k| format!("curated-cascade-{k}")));
    v
}

/// Looks up `paper-counterexample`, `cross`, `line-<n>` or
/// `curated-cascade-<k>`.
pub fn by_name(name: &str) -> Option<PointSet> {
    match name {
        "paper-counterexample" => Some(paper_counterexample()),
        "cross" => Some(cross()),
        _ => {
            if let Some(n) = name.strip_prefix("line-") {
                let n: usize = n.parse().ok()?;
                (1..=IndexSet::CAPACITY).contains(&n).then(|| line(n))
            } else if let Some(k) = name.strip_prefix("curated-cascade-") {
                curated_cascade_instance(k.parse().ok()?).map(|c| c.points)
            } else {
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::affine_span_dim;

    #[test]
    fn counterexample_blocks() {
        let s = paper_counterexample();
        assert_eq!(s.len(), 10);
        for i in 1..=5 {
            let next = if i == 5 { 1 } else { i + 1 };
            assert!(counterexample_block(i).is_disjoint(counterexample_block(next)));
        }
        assert_eq!(counterexample_block(4).to_one_based(), vec![1, 4, 9]);
    }

    #[test]
    fn curated_sizes() {
        for c in curated_cascade() {
            assert_eq!(c.points.len(), affine_span_dim(&c.points) + c.t + 2, "{}", c.name);
        }
        assert!(by_name("line-6").is_some());
        assert!(by_name("curated-cascade-9").is_none());
        assert!(by_name("nope").is_none());
    }
}
