//! Unique Radon points, block decompositions and the `(t+2)`-partition
//! construction for sets of `a + t + 2` points whose Radon point is unique.
//!
//! With `W` the space of affine dependences and `λ_i` the `i`-th coordinate
//! functional on `W`, indices whose functionals are proportional form a block
//! `B_j`, and `λ_i = c_i φ_j` on that block. When the Radon point is the
//! origin, `Σ_{i∈B_j} |c_i| x_i = 0` for every block, so each block's hull
//! contains the origin. With at least `t + 2` blocks these are the parts.
//! With exactly `t + 1` blocks one block is split by the sign of `c_i`.
//!
//! For `t ≥ 1` the second case does not occur: if two blocks both contained
//! the origin, their normalized weights would give a dependence whose
//! coordinates on `B_1` are proportional to `c` and sum to one, while the
//! `c_i` on `B_1` sum to zero. So split instances all have `t = 0`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, rank_of, Vector};
use crate::lp::Barycentric;
use crate::partitions::{Partition, TverbergWitness};
use crate::points::{affine_span_dim, dependence_space, IndexSet, PointSet};
use crate::rational::Rat;
use crate::regions::{cell_dim, cell_feasible, region_dim, tverberg_region, CascadeSum};

/// The single point of `T_2(S)` when `T_2(S)` is nonempty and every feasible
/// 2-partition cell is that same point.
pub fn unique_radon_point(s: &PointSet) -> Result<Option<Vector>> {
    let t2 = tverberg_region(s, 2)?;
    let mut found: Option<Vector> = None;
    for cell in &t2.cells {
        if cell_dim(s, cell)? != 0 {
            return Ok(None);
        }
        let p = cell_feasible(s, cell)?.point().expect("cells of a region are nonempty").to_vec();
        match &found {
            Some(q) if *q != p => return Ok(None),
            Some(_) => {}
            None => found = Some(p),
        }
    }
    Ok(found)
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BlockDecomposition {
    /// Dependence space basis of the ground set.
    pub basis: Vec<Vector>,
    /// Indices whose coordinate vanishes on every dependence.
    pub ignored: IndexSet,
    pub blocks: Vec<IndexSet>,
    /// `φ_j` in basis coordinates: the functional of the least index.
    pub functionals: Vec<Vector>,
    /// `c_i` per index, zero for ignored indices.
    pub constants: Vec<Rat>,
}

/// Per-block sums the construction relies on.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BlockIdentities {
    pub block: IndexSet,
    /// `Σ c_i`
    pub sum_c: Rat,
    /// `Σ c_i x_i`
    pub sum_cx: Vector,
    /// `Σ |c_i| x_i`
    pub sum_abs_cx: Vector,
}

impl BlockDecomposition {
    /// Block containing index `i`.
    pub fn block_of(&self, i: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(i))
    }

    fn functional(&self, i: usize) -> Vector {
        self.basis.iter().map(|w| w[i].clone()).collect()
    }

    /// Re-derives the decomposition from the basis and compares.
    pub fn verify(&self, s: &PointSet) -> bool {
        let n = s.len();
        if self.constants.len() != n || self.functionals.len() != self.blocks.len() {
            return false;
        }
        let m = self.basis.len();
        let mut covered = self.ignored;
        for (j, &b) in self.blocks.iter().enumerate() {
            if b.is_empty() || !b.is_disjoint(covered) || self.functionals[j] != self.functional(b.first().unwrap()) {
                return false;
            }
            covered = covered.union(b);
            for i in b.iter() {
                let scaled = linalg::scale(&self.functionals[j], &self.constants[i]);
                if self.constants[i].is_zero() || self.functional(i) != scaled {
                    return false;
                }
            }
        }
        if covered != s.all() {
            return false;
        }
        if !self.ignored.iter().all(|i| self.functional(i).iter().all(Rat::is_zero) && self.constants[i].is_zero()) {
            return false;
        }
        // distinct blocks are not proportional
        for a in 0..self.blocks.len() {
            for b in a + 1..self.blocks.len() {
                if rank_of(&[self.functionals[a].clone(), self.functionals[b].clone()], m) < 2 {
                    return false;
                }
            }
        }
        true
    }

    pub fn identities(&self, s: &PointSet) -> Vec<BlockIdentities> {
        self.blocks
            .iter()
            .map(|&b| {
                let mut sum_c = Rat::zero();
                let mut sum_cx = vec![Rat::zero(); s.dim()];
                let mut sum_abs_cx = vec![Rat::zero(); s.dim()];
                for i in b.iter() {
                    let c = &self.constants[i];
                    sum_c = &sum_c + c;
                    sum_cx = linalg::add(&sum_cx, &linalg::scale(s.point(i), c));
                    sum_abs_cx = linalg::add(&sum_abs_cx, &linalg::scale(s.point(i), &c.abs()));
                }
                BlockIdentities { block: b, sum_c, sum_cx, sum_abs_cx }
            })
            .collect()
    }
}

/// Splits the indices by proportionality of their coordinate functionals on
/// the dependence space. `s` must have its Radon point at the origin; this is
/// checked on the basis dependences.
pub fn block_decomposition(s: &PointSet) -> Result<BlockDecomposition> {
    s.check_combinatorial()?;
    let basis = dependence_space(s).basis;
    for w in &basis {
        let pos: Vector = w.iter().map(Rat::positive_part).collect();
        if !linalg::is_zero(&s.sum_weighted(&pos)) {
            return Err(Error::NotNormalized);
        }
    }
    let m = basis.len();
    let functional = |i: usize| -> Vector { basis.iter().map(|w| w[i].clone()).collect() };
    let mut ignored = IndexSet::empty();
    let mut blocks: Vec<IndexSet> = Vec::new();
    let mut functionals: Vec<Vector> = Vec::new();
    let mut constants = vec![Rat::zero(); s.len()];
    for i in 0..s.len() {
        let f = functional(i);
        if linalg::is_zero(&f) {
            ignored.insert(i);
            continue;
        }
        let hit = functionals.iter().position(|phi| rank_of(&[phi.clone(), f.clone()], m) == 1);
        match hit {
            Some(j) => {
                let k = functionals[j].iter().position(|v| !v.is_zero()).expect("nonzero functional");
                constants[i] = &f[k] / &functionals[j][k];
                blocks[j].insert(i);
            }
            None => {
                constants[i] = Rat::one();
                blocks.push(IndexSet::singleton(i));
                functionals.push(f);
            }
        }
    }
    Ok(BlockDecomposition { basis, ignored, blocks, functionals, constants })
}

/// For each block, a certificate that the origin lies in its hull, built
/// from the weights `|c_i|`.
pub fn claim_blocks_check(s: &PointSet, bd: &BlockDecomposition) -> Result<Vec<Barycentric>> {
    let origin = vec![Rat::zero(); s.dim()];
    bd.blocks
        .iter()
        .enumerate()
        .map(|(j, &b)| {
            let weights: Vec<Rat> = b.iter().map(|i| bd.constants[i].abs()).collect();
            let total: Rat = weights.iter().sum();
            let cert = Barycentric { indices: b, coefficients: weights.iter().map(|w| w / &total).collect() };
            if cert.verify(s, &origin) {
                Ok(cert)
            } else {
                Err(Error::BlockSumNonzero { block: j })
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Branch {
    /// At least `t + 2` blocks; the first `t + 2` are the parts.
    ManyBlocks,
    /// Exactly `t + 1` blocks; the first one is split by sign.
    SplitCase,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CascadeResult {
    /// The unique Radon point of the input.
    pub origin: Vector,
    pub decomposition: BlockDecomposition,
    pub branch: Branch,
    /// Partition of the input with every hull through `origin`.
    pub witness: TverbergWitness,
}

impl CascadeResult {
    pub fn verify(&self, s: &PointSet, t: usize) -> bool {
        self.witness.point == self.origin && self.witness.partition.len() >= t + 2 && self.witness.verify(s)
    }
}

/// Certificate that the origin is in `conv(part)` where `part ⊇ base` and
/// `base_cert` already certifies it for `base`: extra indices get weight 0.
fn pad(base_cert: &Barycentric, part: IndexSet) -> Barycentric {
    let coefficients = part
        .iter()
        .map(|i| match base_cert.indices.iter().position(|k| k == i) {
            Some(pos) => base_cert.coefficients[pos].clone(),
            None => Rat::zero(),
        })
        .collect();
    Barycentric { indices: part, coefficients }
}

/// Splits a block with `Σ c_i = 0` into its positive and negative indices,
/// each with a certificate for the origin.
fn split_block(s: &PointSet, bd: &BlockDecomposition, b: IndexSet) -> Result<[(IndexSet, Barycentric); 2]> {
    let origin = vec![Rat::zero(); s.dim()];
    let pos: IndexSet = b.iter().filter(|&i| bd.constants[i].is_positive()).collect();
    let neg = b.difference(pos);
    let mut out = Vec::with_capacity(2);
    for side in [pos, neg] {
        if side.is_empty() {
            return Err(Error::HypothesisViolated("a block of a split has constant sign".into()));
        }
        let w: Vec<Rat> = side.iter().map(|i| bd.constants[i].abs()).collect();
        let total: Rat = w.iter().sum();
        let cert = Barycentric { indices: side, coefficients: w.iter().map(|x| x / &total).collect() };
        if !cert.verify(s, &origin) {
            return Err(Error::HypothesisViolated("a signed half of a block misses the Radon point".into()));
        }
        out.push((side, cert));
    }
    let neg = out.pop().unwrap();
    let pos = out.pop().unwrap();
    Ok([pos, neg])
}

/// Builds a partition into at least `t + 2` parts whose hulls share the
/// unique Radon point. `split_all` splits every block in the `t + 1` case,
/// giving `2(t + 1)` parts.
pub fn construct_cascade_partition(s: &PointSet, t: usize, split_all: bool) -> Result<CascadeResult> {
    s.check_combinatorial()?;
    let a = affine_span_dim(s);
    if s.len() != a + t + 2 {
        return Err(Error::HypothesisViolated(format!(
            "expected {} points for affine dimension {a} and t = {t}, found {}",
            a + t + 2,
            s.len()
        )));
    }
    let origin = match unique_radon_point(s)? {
        Some(p) => p,
        None => {
            return Err(Error::HypothesisViolated("T_2 is not a single point".into()));
        }
    };
    let moved = s.translated(&origin);
    let bd = block_decomposition(&moved)?;
    let claims = claim_blocks_check(&moved, &bd)?;
    let nb = bd.blocks.len();
    let (branch, mut parts): (Branch, Vec<(IndexSet, Barycentric)>) = if nb >= t + 2 {
        (Branch::ManyBlocks, bd.blocks.iter().copied().zip(claims).take(t + 2).collect())
    } else if nb == t + 1 {
        let mut parts = Vec::new();
        for (j, (&b, cert)) in bd.blocks.iter().zip(claims).enumerate() {
            if j == 0 || split_all {
                parts.extend(split_block(&moved, &bd, b)?);
            } else {
                parts.push((b, cert));
            }
        }
        (Branch::SplitCase, parts)
    } else {
        return Err(Error::HypothesisViolated(format!("{nb} blocks for t = {t}")));
    };
    // ignored and unused indices go to the first part
    let used = parts.iter().fold(IndexSet::empty(), |acc, (p, _)| acc.union(*p));
    let extra = s.all().difference(used);
    if !extra.is_empty() {
        let (p, cert) = &parts[0];
        let grown = p.union(extra);
        parts[0] = (grown, pad(cert, grown));
    }
    let (sets, coefficients): (Vec<IndexSet>, Vec<Barycentric>) = parts.into_iter().unzip();
    let partition = Partition::new(sets, s.len())?;
    let witness = TverbergWitness { partition, point: origin.clone(), coefficients };
    if !witness.verify(s) {
        return Err(Error::HypothesisViolated("constructed partition failed verification".into()));
    }
    Ok(CascadeResult { origin, decomposition: bd, branch, witness })
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CascadeInequality {
    pub dims: Vec<i64>,
    pub sum: i64,
    /// Affine dimension of the input.
    pub affine_dim: usize,
    /// Largest `m` with `T_m(S)` nonempty.
    pub largest_nonempty: usize,
    pub holds: bool,
}

/// Cascade sum for a set with `dim T_2(S) ≤ 0`.
pub fn verify_cascade_inequality(s: &PointSet) -> Result<CascadeInequality> {
    s.check_combinatorial()?;
    if s.len() >= 2 {
        let t2 = tverberg_region(s, 2)?;
        let d2 = region_dim(s, &t2)?;
        if d2 > 0 {
            return Err(Error::HypothesisViolated(format!("dim T_2 = {d2} > 0")));
        }
    }
    let CascadeSum { dims, sum } = crate::regions::cascade_sum(s)?;
    let largest_nonempty = dims.iter().take_while(|&&d| d >= 0).count();
    Ok(CascadeInequality { dims, sum, affine_dim: affine_span_dim(s), largest_nonempty, holds: sum >= 0 })
}
