//! Point sets, index subsets and the affine-dependence space.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, kernel_basis, Mat, Vector};
use crate::rational::Rat;

/// Subset of point indices, stored as a bit mask. Indices are 0-based in the
/// API and 1-based in every serialized form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexSet(u64);

impl IndexSet {
    /// Largest ground set addressable by an `IndexSet`.
    pub const CAPACITY: usize = 64;

    pub const fn empty() -> Self {
        IndexSet(0)
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= Self::CAPACITY);
        if n == 64 {
            IndexSet(u64::MAX)
        } else {
            IndexSet((1u64 << n) - 1)
        }
    }

    pub const fn from_bits(bits: u64) -> Self {
        IndexSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        IndexSet(1u64 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1u64 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub fn with(self, i: usize) -> Self {
        IndexSet(self.0 | (1u64 << i))
    }

    pub fn without(self, i: usize) -> Self {
        IndexSet(self.0 & !(1u64 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: Self) -> Self {
        IndexSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        IndexSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        IndexSet(self.0 & !o.0)
    }

    pub fn is_disjoint(self, o: Self) -> bool {
        self.0 & o.0 == 0
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> IndexIter {
        IndexIter(self.0)
    }

    pub fn to_one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// Builds from 1-based indices, rejecting 0 and indices beyond `n`.
    pub fn from_one_based(indices: &[usize], n: usize) -> Result<Self> {
        let mut s = IndexSet::empty();
        for &i in indices {
            if i == 0 || i > n || i > Self::CAPACITY {
                return Err(Error::IndexOutOfRange { index: i.wrapping_sub(1), len: n });
            }
            s.insert(i - 1);
        }
        Ok(s)
    }
}

/// All `k`-element subsets of `{0, …, n-1}` in increasing bit order.
pub fn subsets_of_size(n: usize, k: usize) -> SubsetsOfSize {
    assert!(n <= IndexSet::CAPACITY);
    let next = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some(IndexSet::full(k).bits())
    };
    SubsetsOfSize { n, next }
}

pub struct SubsetsOfSize {
    n: usize,
    next: Option<u64>,
}

impl Iterator for SubsetsOfSize {
    type Item = IndexSet;
    fn next(&mut self) -> Option<IndexSet> {
        let cur = self.next?;
        // Gosper's hack
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur.wrapping_add(c);
            if r == 0 {
                None
            } else {
                let nxt = (((r ^ cur) >> 2) / c) | r;
                (self.n == 64 || nxt >> self.n == 0).then_some(nxt)
            }
        };
        Some(IndexSet(cur))
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = IndexSet::empty();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl IntoIterator for IndexSet {
    type Item = usize;
    type IntoIter = IndexIter;
    fn into_iter(self) -> IndexIter {
        self.iter()
    }
}

pub struct IndexIter(u64);

impl Iterator for IndexIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for IndexIter {}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|i| i + 1)).finish()
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for IndexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|i| i + 1))
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for IndexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let v: Vec<usize> = serde::Deserialize::deserialize(d)?;
        IndexSet::from_one_based(&v, IndexSet::CAPACITY).map_err(serde::de::Error::custom)
    }
}

/// Finite set of distinct points with exact coordinates. Point order is the
/// identity of each point.
#[derive(Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PointSet {
    dim: usize,
    points: Vec<Vector>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vector>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { index, expected: dim, found: p.len() });
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::DuplicatePoint { first: i, second: j });
                }
            }
        }
        Ok(PointSet { dim, points })
    }

    pub fn from_i64(dim: usize, points: &[&[i64]]) -> Result<Self> {
        PointSet::new(dim, points.iter().map(|p| p.iter().map(|&x| Rat::from(x)).collect()).collect())
    }

    /// Distinct points on the real line.
    pub fn on_line(values: &[Rat]) -> Result<Self> {
        PointSet::new(1, values.iter().map(|v| vec![v.clone()]).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[Rat] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn all(&self) -> IndexSet {
        IndexSet::full(self.len().min(IndexSet::CAPACITY))
    }

    /// Errors unless the set fits in an [`IndexSet`].
    pub fn check_combinatorial(&self) -> Result<()> {
        if self.len() > IndexSet::CAPACITY {
            return Err(Error::TooManyPoints { len: self.len(), max: IndexSet::CAPACITY });
        }
        Ok(())
    }

    pub fn check_indices(&self, s: IndexSet) -> Result<()> {
        match s.iter().find(|&i| i >= self.len()) {
            Some(index) => Err(Error::IndexOutOfRange { index, len: self.len() }),
            None => Ok(()),
        }
    }

    pub fn check_point(&self, p: &[Rat]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch { index: usize::MAX, expected: self.dim, found: p.len() });
        }
        Ok(())
    }

    /// The `(d+1) × N` matrix whose i-th column is `(x_i, 1)`.
    pub fn lifted_matrix(&self) -> Mat {
        let mut rows: Vec<Vector> = (0..self.dim).map(|k| self.points.iter().map(|p| p[k].clone()).collect()).collect();
        rows.push(vec![Rat::one(); self.len()]);
        Mat::from_rows(rows)
    }

    /// The points indexed by `s`, renumbered in increasing order.
    pub fn restrict(&self, s: IndexSet) -> Result<PointSet> {
        self.check_indices(s)?;
        PointSet::new(self.dim, s.iter().map(|i| self.points[i].clone()).collect())
    }

    pub fn translated(&self, by: &[Rat]) -> PointSet {
        PointSet { dim: self.dim, points: self.points.iter().map(|p| linalg::sub(p, by)).collect() }
    }

    /// Image under `x ↦ M x + b`; errors if `M` is singular (points would merge).
    pub fn affine_image(&self, m: &Mat, b: &[Rat]) -> Result<PointSet> {
        if m.rows() != self.dim || m.cols() != self.dim || m.rank() != self.dim {
            return Err(Error::InvalidArgument("affine map must be invertible".into()));
        }
        PointSet::new(self.dim, self.points.iter().map(|p| linalg::add(&m.mul_vec(p), b)).collect())
    }

    pub fn sum_weighted(&self, weights: &[Rat]) -> Vector {
        linalg::combination(self.dim, weights.iter().zip(self.points.iter().map(Vec::as_slice)))
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointSet").field("dim", &self.dim).field("points", &self.points).finish()
    }
}

/// Affine dependences `α` with `Σ α_i = 0` and `Σ α_i x_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependenceSpace<'a> {
    pub ground: &'a PointSet,
    pub basis: Vec<Vector>,
}

impl DependenceSpace<'_> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Every basis vector satisfies both dependence identities exactly.
    pub fn verify(&self) -> bool {
        self.basis.iter().all(|a| is_dependence(self.ground, a))
            && linalg::rank_of(&self.basis, self.ground.len()) == self.basis.len()
            && self.basis.len() + 1 + affine_span_dim(self.ground) == self.ground.len()
    }
}

pub fn is_dependence(s: &PointSet, alpha: &[Rat]) -> bool {
    alpha.len() == s.len() && alpha.iter().sum::<Rat>().is_zero() && linalg::is_zero(&s.sum_weighted(alpha))
}

/// Kernel of the lifted matrix, in the canonical RREF free-column basis.
pub fn dependence_space(s: &PointSet) -> DependenceSpace<'_> {
    DependenceSpace { ground: s, basis: kernel_basis(&s.lifted_matrix()) }
}

/// Dimension of the affine hull (rank of the lifted matrix minus one).
pub fn affine_span_dim(s: &PointSet) -> usize {
    s.lifted_matrix().rank() - 1
}
