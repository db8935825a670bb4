//! Radon and Tverberg partitions.
//!
//! A partition is tested with one joint linear system: a free point variable
//! `p ∈ R^d` together with barycentric weights for every part, constrained by
//! `Σ_{i∈A_j} λ_{j,i} = 1` and `Σ_{i∈A_j} λ_{j,i} x_i - p = 0`. Rows for part
//! `j` occupy a fixed block, so a certificate refuting the first `k` parts
//! refutes the whole partition after padding with zeros.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::lp::{self, Barycentric, InfeasCert, LinearSystem, Verdict};
use crate::points::{is_dependence, subsets_of_size, IndexSet, PointSet};
use crate::rational::Rat;

/// Disjoint nonempty parts plus explicitly unassigned indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Partition {
    pub parts: Vec<IndexSet>,
    pub unassigned: IndexSet,
}

impl Partition {
    /// Parts over `n` points; every index not in a part is unassigned.
    pub fn new(parts: Vec<IndexSet>, n: usize) -> Result<Self> {
        let mut used = IndexSet::empty();
        for &p in &parts {
            if p.is_empty() {
                return Err(Error::InvalidArgument("partition parts must be nonempty".into()));
            }
            if !p.is_disjoint(used) {
                return Err(Error::InvalidArgument("partition parts must be disjoint".into()));
            }
            used = used.union(p);
        }
        if let Some(index) = used.iter().find(|&i| i >= n) {
            return Err(Error::IndexOutOfRange { index, len: n });
        }
        Ok(Partition { parts, unassigned: IndexSet::full(n).difference(used) })
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn used(&self) -> IndexSet {
        self.parts.iter().fold(IndexSet::empty(), |a, &p| a.union(p))
    }

    /// Checks the structural invariants against a ground set of `n` points.
    pub fn is_valid_for(&self, n: usize) -> bool {
        let mut used = IndexSet::empty();
        for &p in &self.parts {
            if p.is_empty() || !p.is_disjoint(used) {
                return false;
            }
            used = used.union(p);
        }
        used.is_disjoint(self.unassigned) && used.union(self.unassigned) == IndexSet::full(n)
    }
}

/// Number of partitions of an `n`-set into exactly `k` nonempty blocks, or
/// `None` on `u128` overflow.
pub fn stirling2(n: usize, k: usize) -> Option<u128> {
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = (j as u128).checked_mul(row[j])?.checked_add(row[j - 1])?;
        }
        row[0] = 0;
    }
    Some(row[k])
}

/// Unordered partitions of `{0..n}` into exactly `r` nonempty parts, each
/// yielded once in canonical form (parts ordered by least index), in
/// lexicographic order of restricted growth strings.
#[derive(Clone, Debug)]
pub struct PartitionIter {
    n: usize,
    r: usize,
    labels: Vec<usize>,
    prefix_max: Vec<usize>,
    started: bool,
    done: bool,
}

pub fn enumerate_partitions(n: usize, r: usize) -> PartitionIter {
    PartitionIter::new(n, r)
}

impl PartitionIter {
    pub fn new(n: usize, r: usize) -> Self {
        assert!(n <= IndexSet::CAPACITY);
        let done = r == 0 || r > n;
        let mut it = PartitionIter { n, r, labels: vec![0; n], prefix_max: vec![0; n], started: false, done };
        if !done {
            it.complete_from(0);
        }
        it
    }

    /// Smallest completion of `labels[..=i]` reaching exactly `r` labels.
    fn complete_from(&mut self, i: usize) {
        let mut m = self.labels[..=i].iter().copied().max().unwrap_or(0);
        self.prefix_max[i] = m;
        for j in i + 1..self.n {
            let remaining = self.n - j;
            let needed = self.r - 1 - m;
            if remaining > needed {
                self.labels[j] = 0;
            } else {
                m += 1;
                self.labels[j] = m;
            }
            self.prefix_max[j] = m;
        }
    }

    fn advance(&mut self) -> bool {
        for i in (1..self.n).rev() {
            let cap = (self.prefix_max[i - 1] + 1).min(self.r - 1);
            let next = self.labels[i] + 1;
            if next > cap {
                continue;
            }
            let m = self.prefix_max[i - 1].max(next);
            if m + (self.n - 1 - i) < self.r - 1 {
                continue;
            }
            self.labels[i] = next;
            self.complete_from(i);
            return true;
        }
        false
    }

    fn current(&self) -> Partition {
        let mut parts = vec![IndexSet::empty(); self.r];
        for (i, &l) in self.labels.iter().enumerate() {
            parts[l].insert(i);
        }
        Partition { parts, unassigned: IndexSet::empty() }
    }
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        if self.started {
            if !self.advance() {
                self.done = true;
                return None;
            }
        } else {
            self.started = true;
        }
        Some(self.current())
    }
}

/// Column layout of a joint partition system: the point occupies columns
/// `0..dim`, part `j` the columns `offsets[j]..offsets[j] + |A_j|`.
#[derive(Clone, Debug)]
pub struct JointLayout {
    pub dim: usize,
    pub offsets: Vec<usize>,
}

/// Joint system for `∩_j conv(A_j) ≠ ∅`. Rows `j·(d+1)..(j+1)·(d+1)` belong to
/// part `j`.
pub fn joint_system(s: &PointSet, parts: &[IndexSet]) -> (LinearSystem, JointLayout) {
    let d = s.dim();
    let total: usize = d + parts.iter().map(|p| p.len()).sum::<usize>();
    let mut sys = LinearSystem::new(total);
    for k in 0..d {
        sys.set_free(k);
    }
    let mut offsets = Vec::with_capacity(parts.len());
    let mut off = d;
    for &part in parts {
        offsets.push(off);
        let idx: Vec<usize> = part.iter().collect();
        let mut row = vec![Rat::zero(); total];
        for c in 0..idx.len() {
            row[off + c] = Rat::one();
        }
        sys.add_equality(row, Rat::one());
        for k in 0..d {
            let mut row = vec![Rat::zero(); total];
            row[k] = -Rat::one();
            for (c, &i) in idx.iter().enumerate() {
                row[off + c] = s.point(i)[k].clone();
            }
            sys.add_equality(row, Rat::zero());
        }
        off += idx.len();
    }
    (sys, JointLayout { dim: d, offsets })
}

/// Certified common point of the hulls of every part.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TverbergWitness {
    pub partition: Partition,
    pub point: Vector,
    /// One barycentric certificate per part, in part order.
    pub coefficients: Vec<Barycentric>,
}

impl TverbergWitness {
    pub fn verify(&self, s: &PointSet) -> bool {
        self.partition.is_valid_for(s.len())
            && self.coefficients.len() == self.partition.parts.len()
            && self
                .coefficients
                .iter()
                .zip(&self.partition.parts)
                .all(|(c, &part)| c.indices == part && c.verify(s, &self.point))
    }
}

/// Farkas certificate that the hulls of `parts` have no common point.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Refutation {
    pub parts: Vec<IndexSet>,
    pub certificate: InfeasCert,
}

impl Refutation {
    /// Rebuilds the joint system from `parts` and checks the multipliers.
    pub fn verify(&self, s: &PointSet) -> bool {
        if self.parts.iter().any(|&p| p.is_empty() || s.check_indices(p).is_err()) {
            return false;
        }
        let (sys, _) = joint_system(s, &self.parts);
        self.certificate.verify(&sys)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PartitionVerdict {
    Tverberg(TverbergWitness),
    Refuted(Refutation),
}

impl PartitionVerdict {
    pub fn witness(&self) -> Option<&TverbergWitness> {
        match self {
            PartitionVerdict::Tverberg(w) => Some(w),
            PartitionVerdict::Refuted(_) => None,
        }
    }

    pub fn into_witness(self) -> Option<TverbergWitness> {
        match self {
            PartitionVerdict::Tverberg(w) => Some(w),
            PartitionVerdict::Refuted(_) => None,
        }
    }

    pub fn verify(&self, s: &PointSet) -> bool {
        match self {
            PartitionVerdict::Tverberg(w) => w.verify(s),
            PartitionVerdict::Refuted(r) => r.verify(s),
        }
    }
}

/// Solves the joint system for `parts` (no structural checks).
pub fn joint_verdict(s: &PointSet, parts: &[IndexSet]) -> (Verdict, JointLayout) {
    let (sys, layout) = joint_system(s, parts);
    let v = lp::solve_feasibility(&sys);
    debug_assert!(lp::verify_certificate(&sys, &v));
    (v, layout)
}

fn witness_from(s: &PointSet, parts: &[IndexSet], x: &[Rat], layout: &JointLayout) -> (Vector, Vec<Barycentric>) {
    let point = x[..s.dim()].to_vec();
    let coefficients = parts
        .iter()
        .zip(&layout.offsets)
        .map(|(&p, &off)| Barycentric { indices: p, coefficients: x[off..off + p.len()].to_vec() })
        .collect();
    (point, coefficients)
}

/// Decides whether the hulls of the parts of `p` share a point.
pub fn is_tverberg_partition(s: &PointSet, p: &Partition) -> Result<PartitionVerdict> {
    s.check_combinatorial()?;
    if !p.is_valid_for(s.len()) {
        return Err(Error::InvalidArgument("partition does not match the point set".into()));
    }
    Ok(check_parts(s, p))
}

pub(crate) fn check_parts(s: &PointSet, p: &Partition) -> PartitionVerdict {
    // A pair refutation is cheaper and pads to a refutation of the whole.
    if p.parts.len() > 2 {
        let (v, _) = joint_verdict(s, &p.parts[..2]);
        if let Verdict::Infeasible(c) = v {
            let mut multipliers = c.multipliers;
            multipliers.resize(p.parts.len() * (s.dim() + 1), Rat::zero());
            return PartitionVerdict::Refuted(Refutation {
                parts: p.parts.clone(),
                certificate: InfeasCert { multipliers },
            });
        }
    }
    let (v, layout) = joint_verdict(s, &p.parts);
    match v {
        Verdict::Feasible(w) => {
            let (point, coefficients) = witness_from(s, &p.parts, &w.assignment, &layout);
            PartitionVerdict::Tverberg(TverbergWitness { partition: p.clone(), point, coefficients })
        }
        Verdict::Infeasible(c) => PartitionVerdict::Refuted(Refutation { parts: p.parts.clone(), certificate: c }),
    }
}

/// Result of an exhaustive partition search.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TverbergSearch {
    Found(TverbergWitness),
    /// Every partition was refuted. `refutations` is filled only when
    /// requested through [`SearchOptions::keep_refutations`].
    NoneExists {
        examined: u64,
        refutations: Vec<Refutation>,
    },
    /// The budget ran out before the search finished; nothing is claimed.
    Exhausted {
        examined: u64,
    },
}

impl TverbergSearch {
    pub fn witness(&self) -> Option<&TverbergWitness> {
        match self {
            TverbergSearch::Found(w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Maximum number of partitions to examine.
    pub budget: Option<u64>,
    pub keep_refutations: bool,
}

/// Searches every unordered `r`-partition of `s` in canonical order and
/// returns the first certified Tverberg partition.
pub fn tverberg_exists(s: &PointSet, r: usize) -> Result<TverbergSearch> {
    tverberg_search(s, r, &SearchOptions::default())
}

pub fn tverberg_search(s: &PointSet, r: usize, opts: &SearchOptions) -> Result<TverbergSearch> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    s.check_combinatorial()?;
    let mut examined = 0u64;
    let mut refutations = Vec::new();
    for p in enumerate_partitions(s.len(), r) {
        if opts.budget.is_some_and(|b| examined >= b) {
            return Ok(TverbergSearch::Exhausted { examined });
        }
        examined += 1;
        match check_parts(s, &p) {
            PartitionVerdict::Tverberg(w) => return Ok(TverbergSearch::Found(w)),
            PartitionVerdict::Refuted(rf) => {
                if opts.keep_refutations {
                    refutations.push(rf);
                }
            }
        }
    }
    Ok(TverbergSearch::NoneExists { examined, refutations })
}

/// True iff for every `t`-subset `S'` of the indices, the parts with `S'`
/// removed are all nonempty and their hulls still share a point.
pub fn is_tolerant_partition(s: &PointSet, p: &Partition, t: usize) -> Result<bool> {
    s.check_combinatorial()?;
    if !p.is_valid_for(s.len()) {
        return Err(Error::InvalidArgument("partition does not match the point set".into()));
    }
    for deleted in subsets_of_size(s.len(), t) {
        let parts: Vec<IndexSet> = p.parts.iter().map(|&a| a.difference(deleted)).collect();
        if parts.iter().any(|a| a.is_empty()) {
            return Ok(false);
        }
        if !joint_verdict(s, &parts).0.is_feasible() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Ordered Radon partition read off the signs of an affine dependence.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadonPartition {
    /// Indices with positive coefficient.
    pub positive: IndexSet,
    /// Indices with negative coefficient.
    pub negative: IndexSet,
    pub point: Vector,
    /// The dependence rescaled so that `Σ |α_i| = 2`.
    pub normalized: Vector,
    pub positive_weights: Barycentric,
    pub negative_weights: Barycentric,
}

impl RadonPartition {
    pub fn verify(&self, s: &PointSet) -> bool {
        self.positive.is_disjoint(self.negative)
            && is_dependence(s, &self.normalized)
            && self.normalized.iter().map(Rat::abs).sum::<Rat>() == Rat::from(2)
            && self.positive_weights.indices == self.positive
            && self.negative_weights.indices == self.negative
            && self.positive_weights.verify(s, &self.point)
            && self.negative_weights.verify(s, &self.point)
    }
}

/// Scales `alpha` to `ℓ1`-norm 2, splits indices by sign and returns the
/// Radon point `Σ_i max(α_i, 0) x_i`, which lies in both hulls.
pub fn radon_from_dependence(s: &PointSet, alpha: &[Rat]) -> Result<RadonPartition> {
    s.check_combinatorial()?;
    if !is_dependence(s, alpha) || linalg::is_zero(alpha) {
        return Err(Error::NotADependence);
    }
    let norm: Rat = alpha.iter().map(Rat::abs).sum();
    let scale = Rat::from(2) / norm;
    let normalized = linalg::scale(alpha, &scale);
    let positive: IndexSet = (0..s.len()).filter(|&i| normalized[i].is_positive()).collect();
    let negative: IndexSet = (0..s.len()).filter(|&i| normalized[i].is_negative()).collect();
    let plus: Vector = normalized.iter().map(Rat::positive_part).collect();
    let point = s.sum_weighted(&plus);
    let positive_weights =
        Barycentric { indices: positive, coefficients: positive.iter().map(|i| normalized[i].clone()).collect() };
    let negative_weights =
        Barycentric { indices: negative, coefficients: negative.iter().map(|i| -&normalized[i]).collect() };
    Ok(RadonPartition { positive, negative, point, normalized, positive_weights, negative_weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::rational::rat;
    use alloc::collections::BTreeSet;

    fn set(one_based: &[usize]) -> IndexSet {
        IndexSet::from_one_based(one_based, 64).unwrap()
    }

    fn line(vals: &[i64]) -> PointSet {
        PointSet::from_i64(1, &vals.iter().map(core::slice::from_ref).collect::<Vec<_>>()).unwrap()
    }

    /// Recurrence oracle, independent of the iterator.
    fn stirling_oracle(n: u64, k: u64) -> u64 {
        match (n, k) {
            (0, 0) => 1,
            (_, 0) | (0, _) => 0,
            _ => k * stirling_oracle(n - 1, k) + stirling_oracle(n - 1, k - 1),
        }
    }

    #[test]
    fn partition_counts() {
        assert_eq!(enumerate_partitions(3, 3).count(), 1);
        assert_eq!(enumerate_partitions(4, 2).count(), 7);
        assert_eq!(enumerate_partitions(10, 3).count(), 9330);
        assert_eq!(stirling_oracle(10, 3), 9330);
        for n in 1..=9 {
            for r in 1..=n {
                let all: Vec<Partition> = enumerate_partitions(n, r).collect();
                assert_eq!(all.len() as u64, stirling_oracle(n as u64, r as u64));
                assert_eq!(stirling2(n, r), Some(all.len() as u128));
                let distinct: BTreeSet<Vec<u64>> =
                    all.iter().map(|p| p.parts.iter().map(|s| s.bits()).collect()).collect();
                assert_eq!(distinct.len(), all.len());
                for p in &all {
                    assert!(p.is_valid_for(n));
                    assert_eq!(p.parts.len(), r);
                    let mins: Vec<usize> = p.parts.iter().map(|s| s.first().unwrap()).collect();
                    assert!(mins.windows(2).all(|w| w[0] < w[1]));
                }
            }
        }
        assert_eq!(enumerate_partitions(2, 3).count(), 0);
        assert_eq!(enumerate_partitions(3, 0).count(), 0);
    }

    #[test]
    fn partition_examples() {
        let s = gallery::paper_counterexample();
        // X_1 = {e1, e3, f1}, X_2 = {e2, e4, f2}; f_i is point 5 + i
        let p = Partition::new(vec![set(&[1, 3, 6]), set(&[2, 4, 7])], 10).unwrap();
        let w = is_tverberg_partition(&s, &p).unwrap();
        let w = w.witness().expect("Radon partition");
        assert!(linalg::is_zero(&w.point));
        assert!(w.verify(&s));

        let two = line(&[0, 7]);
        let p = Partition::new(vec![set(&[1]), set(&[2])], 2).unwrap();
        let v = is_tverberg_partition(&two, &p).unwrap();
        assert!(v.witness().is_none() && v.verify(&two));

        let three = line(&[0, 1, 2]);
        let p = Partition::new(vec![set(&[1, 3]), set(&[2])], 3).unwrap();
        let v = is_tverberg_partition(&three, &p).unwrap();
        assert_eq!(v.witness().unwrap().point, vec![Rat::from(1)]);
    }

    #[test]
    fn tverberg_examples() {
        let quad = PointSet::from_i64(2, &[&[0, 0], &[4, 1], &[1, 3], &[5, 5]]).unwrap();
        let w = tverberg_exists(&quad, 2).unwrap();
        assert!(w.witness().unwrap().verify(&quad));

        let seven = PointSet::from_i64(2, &[&[0, 0], &[9, 1], &[2, 8], &[5, 3], &[7, 7], &[1, 5], &[4, 4]]).unwrap();
        assert!(tverberg_exists(&seven, 3).unwrap().witness().unwrap().verify(&seven));

        let tight = line(&[0, 1, 2, 3]);
        assert!(matches!(tverberg_exists(&tight, 3).unwrap(), TverbergSearch::NoneExists { .. }));
        let opts = SearchOptions { budget: Some(2), keep_refutations: false };
        assert_eq!(tverberg_search(&tight, 3, &opts).unwrap(), TverbergSearch::Exhausted { examined: 2 });
    }

    /// Brute-force interval oracle for 1-D tolerance.
    fn tolerant_1d(vals: &[i64], parts: &[Vec<usize>], t: usize) -> bool {
        let n = vals.len();
        subsets_of_size(n, t).all(|del| {
            let ivs: Vec<Option<(i64, i64)>> = parts
                .iter()
                .map(|p| {
                    let kept: Vec<i64> = p.iter().filter(|&&i| !del.contains(i)).map(|&i| vals[i]).collect();
                    Some((*kept.iter().min()?, *kept.iter().max()?))
                })
                .collect();
            if ivs.iter().any(Option::is_none) {
                return false;
            }
            let lo = ivs.iter().map(|iv| iv.unwrap().0).max().unwrap();
            let hi = ivs.iter().map(|iv| iv.unwrap().1).min().unwrap();
            lo <= hi
        })
    }

    #[test]
    fn tolerance_examples() {
        let three = line(&[0, 1, 2]);
        let p = Partition::new(vec![set(&[1, 3]), set(&[2])], 3).unwrap();
        assert!(is_tolerant_partition(&three, &p, 0).unwrap());
        assert!(!is_tolerant_partition(&three, &p, 1).unwrap());

        let vals = [0, 1, 2, 3, 4, 5];
        let six = line(&vals);
        let p = Partition::new(vec![set(&[1, 3, 5]), set(&[2, 4, 6])], 6).unwrap();
        let oracle = tolerant_1d(&vals, &[vec![0, 2, 4], vec![1, 3, 5]], 1);
        assert!(oracle, "frozen from the interval oracle");
        assert_eq!(is_tolerant_partition(&six, &p, 1).unwrap(), oracle);
        assert!(!is_tolerant_partition(&six, &p, 2).unwrap());
        assert!(!tolerant_1d(&vals, &[vec![0, 2, 4], vec![1, 3, 5]], 2));
    }

    #[test]
    fn radon_examples() {
        let three = line(&[0, 1, 2]);
        let alpha = [Rat::from(1), Rat::from(-2), Rat::from(1)];
        let rp = radon_from_dependence(&three, &alpha).unwrap();
        assert_eq!(rp.positive, set(&[1, 3]));
        assert_eq!(rp.negative, set(&[2]));
        assert_eq!(rp.point, vec![Rat::from(1)]);
        assert_eq!(rp.normalized, vec![rat(1, 2), Rat::from(-1), rat(1, 2)]);
        assert!(rp.verify(&three));

        let neg: Vec<Rat> = alpha.iter().map(|a| -a).collect();
        let rn = radon_from_dependence(&three, &neg).unwrap();
        assert_eq!((rn.positive, rn.negative), (rp.negative, rp.positive));
        assert_eq!(rn.point, rp.point);

        let cross = gallery::cross();
        let a: Vec<Rat> = [1, 1, 0, 0, -2].iter().map(|&x| Rat::from(x)).collect();
        let rc = radon_from_dependence(&cross, &a).unwrap();
        assert_eq!((rc.positive, rc.negative), (set(&[1, 2]), set(&[5])));
        assert!(linalg::is_zero(&rc.point));

        assert_eq!(radon_from_dependence(&three, &vec![Rat::zero(); 3]), Err(Error::NotADependence));
        assert_eq!(
            radon_from_dependence(&three, &[Rat::from(1), Rat::from(-1), Rat::zero()]),
            Err(Error::NotADependence)
        );
    }
}
