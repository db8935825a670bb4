//! `T_r(S)` and `C^t_r(S)` as finite unions of convex cells.
//!
//! A cell is given implicitly by a list of ground subsets and stands for the
//! intersection of their hulls. Feasibility uses the joint barycentric system
//! for small cells and the halfspace description of each hull otherwise; both
//! paths return certificates that can be re-checked by substitution.
//!
//! Dimension means the largest affine-hull dimension over the cells. For a
//! finite union of polytopes this equals the covering dimension.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::halfspace::{hull_halfspaces, Constraint, HalfspaceRep};
use crate::linalg::{self, kernel_basis, Mat, Vector};
use crate::lp::{self, hull_membership_system, Barycentric, InfeasCert, LinearSystem, Optimum, Verdict};
use crate::partitions::{enumerate_partitions, joint_system, joint_verdict, Partition, Refutation, TverbergWitness};
use crate::points::{subsets_of_size, IndexSet, PointSet};
use crate::rational::Rat;

/// Cells whose hulls have at most this many points in total are decided with
/// the joint barycentric system.
const JOINT_LIMIT: usize = 48;

/// Violated constraints added per round of constraint generation.
const GENERATION_BATCH: usize = 16;

/// `{p : p ∈ conv(A) for every A in hulls}`. Hulls are kept sorted and
/// without repetition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvexCell {
    pub hulls: Vec<IndexSet>,
}

impl ConvexCell {
    pub fn new(mut hulls: Vec<IndexSet>) -> Result<Self> {
        if hulls.is_empty() {
            return Err(Error::InvalidArgument("a cell needs at least one hull".into()));
        }
        if hulls.iter().any(|h| h.is_empty()) {
            return Err(Error::EmptyIndexSet);
        }
        hulls.sort();
        hulls.dedup();
        Ok(ConvexCell { hulls })
    }

    /// Cell of a single hull.
    pub fn hull(indices: IndexSet) -> Result<Self> {
        Self::new(vec![indices])
    }

    fn total_size(&self) -> usize {
        self.hulls.iter().map(|h| h.len()).sum()
    }

    fn check(&self, s: &PointSet) -> Result<()> {
        for &h in &self.hulls {
            if h.is_empty() {
                return Err(Error::EmptyIndexSet);
            }
            s.check_indices(h)?;
        }
        Ok(())
    }
}

/// Union of cells over a common ground set; no cells means the empty set.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Region {
    pub cells: Vec<ConvexCell>,
}

impl Region {
    pub fn empty() -> Self {
        Region { cells: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn canonicalize(&mut self) {
        self.cells.sort();
        self.cells.dedup();
    }
}

/// A point of a cell with one barycentric certificate per hull.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CellWitness {
    pub point: Vector,
    pub memberships: Vec<Barycentric>,
}

impl CellWitness {
    pub fn verify(&self, s: &PointSet, cell: &ConvexCell) -> bool {
        self.memberships.len() == cell.hulls.len()
            && self.memberships.iter().zip(&cell.hulls).all(|(b, &h)| b.indices == h && b.verify(s, &self.point))
    }
}

/// Inequalities valid on the named hulls whose conjunction is infeasible.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HalfspaceRefutation {
    pub constraints: Vec<(IndexSet, Constraint)>,
    pub certificate: InfeasCert,
}

impl HalfspaceRefutation {
    pub fn verify(&self, s: &PointSet, cell: &ConvexCell) -> bool {
        for (h, c) in &self.constraints {
            if !cell.hulls.contains(h) || c.normal.len() != s.dim() {
                return false;
            }
            if !h.iter().all(|i| c.holds(s.point(i))) {
                return false;
            }
        }
        let cons: Vec<&Constraint> = self.constraints.iter().map(|(_, c)| c).collect();
        self.certificate.verify(&constraint_system(s.dim(), &cons))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CellRefutation {
    Joint(Refutation),
    Halfspace(HalfspaceRefutation),
}

impl CellRefutation {
    pub fn verify(&self, s: &PointSet, cell: &ConvexCell) -> bool {
        match self {
            CellRefutation::Joint(r) => r.parts == cell.hulls && r.verify(s),
            CellRefutation::Halfspace(h) => h.verify(s, cell),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CellVerdict {
    Member(CellWitness),
    Empty(CellRefutation),
}

impl CellVerdict {
    pub fn point(&self) -> Option<&[Rat]> {
        match self {
            CellVerdict::Member(w) => Some(&w.point),
            CellVerdict::Empty(_) => None,
        }
    }

    pub fn verify(&self, s: &PointSet, cell: &ConvexCell) -> bool {
        match self {
            CellVerdict::Member(w) => w.verify(s, cell),
            CellVerdict::Empty(r) => r.verify(s, cell),
        }
    }
}

/// Variables: the point (free, `dim` columns) then one slack per inequality.
fn constraint_system(dim: usize, cons: &[&Constraint]) -> LinearSystem {
    let slacks = cons.iter().filter(|c| !c.equality).count();
    let mut sys = LinearSystem::new(dim + slacks);
    for k in 0..dim {
        sys.set_free(k);
    }
    let mut next = dim;
    for c in cons {
        let mut row = c.normal.clone();
        row.resize(dim + slacks, Rat::zero());
        if !c.equality {
            row[next] = Rat::one();
            next += 1;
        }
        sys.add_equality(row, c.offset.clone());
    }
    sys
}

/// Caches halfspace descriptions of hulls of one ground set.
pub struct HullCache<'a> {
    ground: &'a PointSet,
    reps: BTreeMap<IndexSet, HalfspaceRep>,
}

impl<'a> HullCache<'a> {
    pub fn new(ground: &'a PointSet) -> Self {
        HullCache { ground, reps: BTreeMap::new() }
    }

    pub fn ground(&self) -> &'a PointSet {
        self.ground
    }

    pub fn rep(&mut self, h: IndexSet) -> &HalfspaceRep {
        let g = self.ground;
        self.reps.entry(h).or_insert_with(|| hull_halfspaces(g, h))
    }

    /// Distinct constraints of all hulls of the cell, tagged with a hull on
    /// which each is valid.
    fn constraints(&mut self, cell: &ConvexCell) -> Vec<(IndexSet, Constraint)> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &h in &cell.hulls {
            for c in &self.rep(h).constraints {
                if seen.insert(c.clone()) {
                    out.push((h, c.clone()));
                }
            }
        }
        out
    }

    /// Maximizes `objective · p` over the cell (or only finds a point when
    /// no objective is given). Starts from the constraints of the first hull,
    /// which bound the problem, and adds violated constraints until the
    /// optimum satisfies all of them.
    fn optimize(&mut self, cell: &ConvexCell, objective: Option<&[Rat]>) -> CellOpt {
        let d = self.ground.dim();
        let all = self.constraints(cell);
        let first = self.rep(cell.hulls[0]).constraints.len();
        let mut working: Vec<usize> = (0..first).collect();
        let mut in_working = vec![false; all.len()];
        for &i in &working {
            in_working[i] = true;
        }
        loop {
            let refs: Vec<&Constraint> = working.iter().map(|&i| &all[i].1).collect();
            let sys = constraint_system(d, &refs);
            let point = match objective {
                None => match lp::solve_feasibility(&sys) {
                    Verdict::Feasible(w) => w.assignment[..d].to_vec(),
                    Verdict::Infeasible(c) => {
                        return CellOpt::Empty(working.iter().map(|&i| all[i].clone()).collect(), c)
                    }
                },
                Some(obj) => {
                    let mut o = obj.to_vec();
                    o.resize(sys.variables(), Rat::zero());
                    match lp::maximize(&sys, &o) {
                        Optimum::Optimal { assignment, .. } => assignment[..d].to_vec(),
                        Optimum::Infeasible(c) => {
                            return CellOpt::Empty(working.iter().map(|&i| all[i].clone()).collect(), c)
                        }
                        Optimum::Unbounded => unreachable!("a hull is bounded"),
                    }
                }
            };
            let mut violated: Vec<(Rat, usize)> = (0..all.len())
                .filter(|&i| !in_working[i])
                .filter_map(|i| {
                    let c = &all[i].1;
                    let excess = linalg::dot(&c.normal, &point) - &c.offset;
                    let bad = if c.equality { !excess.is_zero() } else { excess.is_positive() };
                    bad.then(|| (excess.abs(), i))
                })
                .collect();
            if violated.is_empty() {
                return CellOpt::Point(point);
            }
            violated.sort_by(|a, b| b.cmp(a));
            for &(_, i) in violated.iter().take(GENERATION_BATCH) {
                working.push(i);
                in_working[i] = true;
            }
        }
    }

    /// Drops every hull that contains the hull of another listed subset.
    pub fn simplify(&mut self, cell: &ConvexCell) -> ConvexCell {
        let g = self.ground;
        let hulls = &cell.hulls;
        let mut keep = vec![true; hulls.len()];
        for i in 0..hulls.len() {
            for j in 0..hulls.len() {
                if i == j || !keep[j] || !keep[i] {
                    continue;
                }
                // drop i if conv(hulls[j]) ⊆ conv(hulls[i])
                let inner = hulls[j];
                let contained = inner.is_subset(hulls[i]) || {
                    let rep = self.rep(hulls[i]);
                    inner.iter().all(|k| rep.contains(g.point(k)))
                };
                if contained {
                    keep[i] = false;
                }
            }
        }
        ConvexCell { hulls: hulls.iter().zip(&keep).filter(|(_, &k)| k).map(|(&h, _)| h).collect() }
    }

    fn nonempty(&mut self, cell: &ConvexCell) -> bool {
        if cell.total_size() <= JOINT_LIMIT {
            joint_verdict(self.ground, &cell.hulls).0.is_feasible()
        } else {
            matches!(self.optimize(cell, None), CellOpt::Point(_))
        }
    }

    /// Largest value of `objective · p` over a nonempty cell.
    fn max_value(&mut self, cell: &ConvexCell, objective: &[Rat]) -> Rat {
        match self.optimize(cell, Some(objective)) {
            CellOpt::Point(p) => linalg::dot(objective, &p),
            CellOpt::Empty(..) => panic!("cell is empty"),
        }
    }

    /// Exact bounding box of a nonempty cell: per coordinate (min, max).
    fn bounding_box(&mut self, cell: &ConvexCell) -> Vec<(Rat, Rat)> {
        let d = self.ground.dim();
        (0..d)
            .map(|k| {
                let mut obj = vec![Rat::zero(); d];
                obj[k] = Rat::one();
                let hi = self.max_value(cell, &obj);
                obj[k] = -Rat::one();
                let lo = -self.max_value(cell, &obj);
                (lo, hi)
            })
            .collect()
    }

    /// `a ⊆ b` for nonempty cells, decided by maximizing every constraint of
    /// `b` over `a`.
    fn contained_in(&mut self, a: &ConvexCell, b: &ConvexCell) -> bool {
        for (_, c) in self.constraints(b) {
            if self.max_value(a, &c.normal) > c.offset {
                return false;
            }
            if c.equality {
                let neg = linalg::scale(&c.normal, &-Rat::one());
                if -self.max_value(a, &neg) < c.offset {
                    return false;
                }
            }
        }
        true
    }
}

enum CellOpt {
    /// Constraints of the working set and multipliers refuting them.
    Empty(Vec<(IndexSet, Constraint)>, InfeasCert),
    Point(Vector),
}

/// Decides whether the cell is nonempty, with a certificate either way.
pub fn cell_feasible(s: &PointSet, cell: &ConvexCell) -> Result<CellVerdict> {
    cell.check(s)?;
    Ok(cell_verdict(&mut HullCache::new(s), cell))
}

fn cell_verdict(cache: &mut HullCache<'_>, cell: &ConvexCell) -> CellVerdict {
    let s = cache.ground;
    if cell.total_size() <= JOINT_LIMIT {
        let (v, layout) = joint_verdict(s, &cell.hulls);
        return match v {
            Verdict::Feasible(w) => {
                let x = &w.assignment;
                let memberships = cell
                    .hulls
                    .iter()
                    .zip(&layout.offsets)
                    .map(|(&h, &off)| Barycentric { indices: h, coefficients: x[off..off + h.len()].to_vec() })
                    .collect();
                CellVerdict::Member(CellWitness { point: x[..s.dim()].to_vec(), memberships })
            }
            Verdict::Infeasible(c) => {
                CellVerdict::Empty(CellRefutation::Joint(Refutation { parts: cell.hulls.clone(), certificate: c }))
            }
        };
    }
    match cache.optimize(cell, None) {
        CellOpt::Point(point) => {
            let memberships = cell
                .hulls
                .iter()
                .map(|&h| {
                    let v = lp::solve_feasibility(&hull_membership_system(&point, s, h));
                    let w = v.witness().expect("halfspace description is exact");
                    Barycentric { indices: h, coefficients: w.assignment.clone() }
                })
                .collect();
            CellVerdict::Member(CellWitness { point, memberships })
        }
        CellOpt::Empty(constraints, certificate) => {
            CellVerdict::Empty(CellRefutation::Halfspace(HalfspaceRefutation { constraints, certificate }))
        }
    }
}

/// Affine-hull dimension of the cell, `-1` when empty.
///
/// Keeps directions `V` inside the affine hull and normals `N` orthogonal to
/// it. A vector `c ⊥ V ∪ N` is either constant on the cell (a new normal) or
/// is not, and then an optimizer of `c·p` gives a new direction.
pub fn cell_dim(s: &PointSet, cell: &ConvexCell) -> Result<i64> {
    cell.check(s)?;
    Ok(dim_with(&mut HullCache::new(s), cell))
}

fn dim_with(cache: &mut HullCache<'_>, cell: &ConvexCell) -> i64 {
    let d = cache.ground.dim();
    let p0 = match cache.optimize(cell, None) {
        CellOpt::Point(p) => p,
        CellOpt::Empty(..) => return -1,
    };
    let mut dirs: Vec<Vector> = Vec::new();
    let mut normals: Vec<Vector> = Vec::new();
    while dirs.len() + normals.len() < d {
        let rows: Vec<Vector> = dirs.iter().chain(&normals).cloned().collect();
        let c = if rows.is_empty() {
            let mut e = vec![Rat::zero(); d];
            e[0] = Rat::one();
            e
        } else {
            kernel_basis(&Mat::from_rows(rows)).into_iter().next().expect("rank below dimension")
        };
        let base = linalg::dot(&c, &p0);
        let mut found = None;
        for obj in [c.clone(), linalg::scale(&c, &-Rat::one())] {
            if let CellOpt::Point(p) = cache.optimize(cell, Some(&obj)) {
                if linalg::dot(&c, &p) != base {
                    found = Some(linalg::sub(&p, &p0));
                    break;
                }
            }
        }
        match found {
            Some(v) => dirs.push(v),
            None => normals.push(c),
        }
    }
    dirs.len() as i64
}

/// `T_r` restricted to the points in `subset`, with cells over the original
/// indices.
fn region_on(s: &PointSet, subset: IndexSet, r: usize) -> Region {
    let idx: Vec<usize> = subset.iter().collect();
    let mut cells = Vec::new();
    for p in enumerate_partitions(idx.len(), r) {
        let parts: Vec<IndexSet> = p.parts.iter().map(|part| part.iter().map(|k| idx[k]).collect()).collect();
        let partition = Partition { parts, unassigned: IndexSet::empty() };
        let feasible = if partition.parts.len() > 2 && !joint_verdict(s, &partition.parts[..2]).0.is_feasible() {
            false
        } else {
            joint_verdict(s, &partition.parts).0.is_feasible()
        };
        if feasible {
            cells.push(ConvexCell::new(partition.parts).expect("nonempty parts"));
        }
    }
    let mut reg = Region { cells };
    reg.canonicalize();
    reg
}

/// Union of the cells of all feasible unordered `r`-partitions.
pub fn tverberg_region(s: &PointSet, r: usize) -> Result<Region> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    s.check_combinatorial()?;
    Ok(region_on(s, s.all(), r))
}

/// `-1` for the empty region, else the largest cell dimension.
pub fn region_dim(s: &PointSet, reg: &Region) -> Result<i64> {
    let mut cache = HullCache::new(s);
    let mut best = -1;
    for c in &reg.cells {
        c.check(s)?;
        best = best.max(dim_with(&mut cache, c));
        if best == s.dim() as i64 {
            break;
        }
    }
    Ok(best)
}

/// Why a point lies outside a hull: multipliers for the membership system.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HullExclusion {
    pub hull: IndexSet,
    pub certificate: InfeasCert,
}

impl HullExclusion {
    pub fn verify(&self, s: &PointSet, p: &[Rat]) -> bool {
        !self.hull.is_empty()
            && s.check_indices(self.hull).is_ok()
            && p.len() == s.dim()
            && self.certificate.verify(&hull_membership_system(p, s, self.hull))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RegionMembership {
    Inside {
        cell: usize,
        memberships: Vec<Barycentric>,
    },
    /// One excluding hull per cell, in cell order.
    Outside {
        exclusions: Vec<HullExclusion>,
    },
}

impl RegionMembership {
    pub fn is_inside(&self) -> bool {
        matches!(self, RegionMembership::Inside { .. })
    }

    pub fn verify(&self, s: &PointSet, reg: &Region, p: &[Rat]) -> bool {
        match self {
            RegionMembership::Inside { cell, memberships } => reg
                .cells
                .get(*cell)
                .is_some_and(|c| CellWitness { point: p.to_vec(), memberships: memberships.clone() }.verify(s, c)),
            RegionMembership::Outside { exclusions } => {
                exclusions.len() == reg.cells.len()
                    && exclusions.iter().zip(&reg.cells).all(|(e, c)| c.hulls.contains(&e.hull) && e.verify(s, p))
            }
        }
    }
}

/// Memoized `p ∈ conv(A)` decisions for a fixed point.
pub(crate) struct PointOracle<'a> {
    s: &'a PointSet,
    p: &'a [Rat],
    memo: BTreeMap<IndexSet, Verdict>,
}

impl<'a> PointOracle<'a> {
    pub(crate) fn new(s: &'a PointSet, p: &'a [Rat]) -> Self {
        PointOracle { s, p, memo: BTreeMap::new() }
    }

    pub(crate) fn verdict(&mut self, h: IndexSet) -> &Verdict {
        let (s, p) = (self.s, self.p);
        self.memo.entry(h).or_insert_with(|| lp::solve_feasibility(&hull_membership_system(p, s, h)))
    }

    pub(crate) fn contains(&mut self, h: IndexSet) -> bool {
        self.verdict(h).is_feasible()
    }

    pub(crate) fn barycentric(&mut self, h: IndexSet) -> Option<Barycentric> {
        self.verdict(h).witness().map(|w| Barycentric { indices: h, coefficients: w.assignment.clone() })
    }

    pub(crate) fn exclusion(&mut self, h: IndexSet) -> Option<HullExclusion> {
        self.verdict(h).certificate().map(|c| HullExclusion { hull: h, certificate: c.clone() })
    }
}

/// Decides `p ∈ reg` hull by hull.
pub fn region_contains(s: &PointSet, reg: &Region, p: &[Rat]) -> Result<RegionMembership> {
    s.check_point(p)?;
    let mut oracle = PointOracle::new(s, p);
    let mut exclusions = Vec::with_capacity(reg.cells.len());
    for (k, cell) in reg.cells.iter().enumerate() {
        cell.check(s)?;
        match cell.hulls.iter().find(|&&h| !oracle.contains(h)) {
            Some(&h) => exclusions.push(oracle.exclusion(h).expect("infeasible")),
            None => {
                let memberships = cell.hulls.iter().map(|&h| oracle.barycentric(h).expect("feasible")).collect();
                return Ok(RegionMembership::Inside { cell: k, memberships });
            }
        }
    }
    Ok(RegionMembership::Outside { exclusions })
}

fn intersect_with(cache: &mut HullCache<'_>, a: &Region, b: &Region) -> Region {
    let mut cells = Vec::new();
    for x in &a.cells {
        for y in &b.cells {
            let mut hulls = x.hulls.clone();
            hulls.extend_from_slice(&y.hulls);
            let cell = cache.simplify(&ConvexCell::new(hulls).expect("nonempty"));
            if cache.nonempty(&cell) {
                cells.push(cell);
            }
        }
    }
    let mut reg = Region { cells };
    reg.canonicalize();
    reg
}

/// Pairwise concatenation of hull lists; empty products are dropped.
pub fn region_intersect(s: &PointSet, a: &Region, b: &Region) -> Result<Region> {
    for c in a.cells.iter().chain(&b.cells) {
        c.check(s)?;
    }
    Ok(intersect_with(&mut HullCache::new(s), a, b))
}

/// Removes every cell contained in another cell of the region. Used to keep
/// iterated intersections small; the point set is unchanged.
pub fn compact_region(s: &PointSet, reg: &Region) -> Result<Region> {
    for c in &reg.cells {
        c.check(s)?;
    }
    Ok(compact_with(&mut HullCache::new(s), reg))
}

fn compact_with(cache: &mut HullCache<'_>, reg: &Region) -> Region {
    let cells = &reg.cells;
    let boxes: Vec<Vec<(Rat, Rat)>> = cells.iter().map(|c| cache.bounding_box(c)).collect();
    let inside = |a: &[(Rat, Rat)], b: &[(Rat, Rat)]| a.iter().zip(b).all(|(x, y)| x.0 >= y.0 && x.1 <= y.1);
    let mut alive = vec![true; cells.len()];
    for i in 0..cells.len() {
        for j in 0..cells.len() {
            if i == j || !alive[j] || !inside(&boxes[i], &boxes[j]) {
                continue;
            }
            // among equal cells the first one survives
            if cache.contained_in(&cells[i], &cells[j])
                && (j < i || !inside(&boxes[j], &boxes[i]) || !cache.contained_in(&cells[j], &cells[i]))
            {
                alive[i] = false;
                break;
            }
        }
    }
    Region { cells: cells.iter().zip(&alive).filter(|(_, &a)| a).map(|(c, _)| c.clone()).collect() }
}

fn check_core_args(s: &PointSet, r: usize, t: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    s.check_combinatorial()?;
    if t >= s.len() {
        return Err(Error::InvalidArgument("t must be smaller than the number of points".into()));
    }
    Ok(())
}

/// `C^t_r(S)`: the intersection of `T_r(S \ S')` over all `t`-subsets `S'`.
pub fn core_region(s: &PointSet, r: usize, t: usize) -> Result<Region> {
    check_core_args(s, r, t)?;
    if t == 0 {
        return tverberg_region(s, r);
    }
    let all = s.all();
    let mut cache = HullCache::new(s);
    let mut acc: Option<Region> = None;
    for deleted in subsets_of_size(s.len(), t) {
        let next = region_on(s, all.difference(deleted), r);
        let merged = match acc {
            None => compact_with(&mut cache, &next),
            Some(prev) => {
                let x = intersect_with(&mut cache, &prev, &next);
                compact_with(&mut cache, &x)
            }
        };
        if merged.is_empty() {
            return Ok(merged);
        }
        acc = Some(merged);
    }
    let mut reg = acc.unwrap_or_default();
    reg.canonicalize();
    Ok(reg)
}

/// Certified answer to `p ∈ C^t_r(S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CoreMembership {
    /// One witness per `t`-subset, in enumeration order; the deleted points
    /// are the unassigned indices of each witness.
    Member { witnesses: Vec<TverbergWitness> },
    /// For the deleted set, every `r`-partition of the remaining points has a
    /// part among `exclusions`.
    NotMember { deleted: IndexSet, exclusions: Vec<HullExclusion> },
}

impl CoreMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, CoreMembership::Member { .. })
    }

    pub fn verify(&self, s: &PointSet, p: &[Rat], r: usize, t: usize) -> bool {
        match self {
            CoreMembership::Member { witnesses } => {
                let expected: Vec<IndexSet> = subsets_of_size(s.len(), t).collect();
                witnesses.len() == expected.len()
                    && witnesses.iter().zip(&expected).all(|(w, &del)| {
                        w.partition.unassigned == del
                            && w.partition.parts.len() == r
                            && w.point.as_slice() == p
                            && w.verify(s)
                    })
            }
            CoreMembership::NotMember { deleted, exclusions } => {
                if deleted.len() != t || s.check_indices(*deleted).is_err() {
                    return false;
                }
                if !exclusions.iter().all(|e| e.verify(s, p)) {
                    return false;
                }
                let excluded: BTreeSet<IndexSet> = exclusions.iter().map(|e| e.hull).collect();
                let idx: Vec<usize> = s.all().difference(*deleted).iter().collect();
                enumerate_partitions(idx.len(), r).all(|part| {
                    part.parts.iter().any(|a| excluded.contains(&a.iter().map(|k| idx[k]).collect::<IndexSet>()))
                })
            }
        }
    }
}

/// Decides `p ∈ C^t_r(S)` without building the region: for every deletion,
/// searches the `r`-partitions of the remaining points with `p` fixed.
pub fn core_member(s: &PointSet, p: &[Rat], r: usize, t: usize) -> Result<CoreMembership> {
    check_core_args(s, r, t)?;
    s.check_point(p)?;
    let mut oracle = PointOracle::new(s, p);
    let all = s.all();
    let mut witnesses = Vec::new();
    for deleted in subsets_of_size(s.len(), t) {
        let idx: Vec<usize> = all.difference(deleted).iter().collect();
        let mut exclusions: BTreeMap<IndexSet, HullExclusion> = BTreeMap::new();
        let mut found = None;
        for part in enumerate_partitions(idx.len(), r) {
            let parts: Vec<IndexSet> = part.parts.iter().map(|a| a.iter().map(|k| idx[k]).collect()).collect();
            match parts.iter().find(|&&a| !oracle.contains(a)) {
                Some(&a) => {
                    exclusions.entry(a).or_insert_with(|| oracle.exclusion(a).expect("infeasible"));
                }
                None => {
                    found = Some(parts);
                    break;
                }
            }
        }
        match found {
            Some(parts) => {
                let coefficients = parts.iter().map(|&a| oracle.barycentric(a).expect("feasible")).collect();
                let partition = Partition::new(parts, s.len()).expect("disjoint parts");
                witnesses.push(TverbergWitness { partition, point: p.to_vec(), coefficients });
            }
            None => {
                return Ok(CoreMembership::NotMember { deleted, exclusions: exclusions.into_values().collect() });
            }
        }
    }
    Ok(CoreMembership::Member { witnesses })
}

/// Per-`r` dimensions of `T_r(S)` for `r = 1..=|S|` and their sum.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CascadeSum {
    pub dims: Vec<i64>,
    pub sum: i64,
}

/// Once some `T_r` is empty every later one is too, since `T_{r+1} ⊆ T_r`.
pub fn cascade_sum(s: &PointSet) -> Result<CascadeSum> {
    s.check_combinatorial()?;
    let mut dims = Vec::with_capacity(s.len());
    for r in 1..=s.len() {
        if dims.last() == Some(&-1) {
            dims.push(-1);
            continue;
        }
        let reg = tverberg_region(s, r)?;
        dims.push(region_dim(s, &reg)?);
    }
    let sum = dims.iter().sum();
    Ok(CascadeSum { dims, sum })
}

/// Closed intervals `[lo, hi]` covered by a region of a point set on the
/// line, merged and sorted.
pub fn region_intervals_1d(s: &PointSet, reg: &Region) -> Result<Vec<(Rat, Rat)>> {
    if s.dim() != 1 {
        return Err(Error::InvalidArgument("interval form needs points on a line".into()));
    }
    let mut cache = HullCache::new(s);
    let mut iv: Vec<(Rat, Rat)> = Vec::new();
    for c in &reg.cells {
        c.check(s)?;
        if cache.nonempty(c) {
            let b = cache.bounding_box(c);
            iv.push(b[0].clone());
        }
    }
    iv.sort();
    let mut merged: Vec<(Rat, Rat)> = Vec::new();
    for (lo, hi) in iv {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => {
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => merged.push((lo, hi)),
        }
    }
    Ok(merged)
}

/// Joint system of a cell, with the point in the first `dim` columns.
pub fn cell_joint_system(s: &PointSet, cell: &ConvexCell) -> LinearSystem {
    joint_system(s, &cell.hulls).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::rational::rat;

    fn set(v: &[usize]) -> IndexSet {
        v.iter().map(|i| i - 1).collect()
    }

    fn cell(hulls: &[&[usize]]) -> ConvexCell {
        ConvexCell::new(hulls.iter().map(|h| set(h)).collect()).unwrap()
    }

    fn ivs(v: &[(i64, i64)]) -> Vec<(Rat, Rat)> {
        v.iter().map(|&(a, b)| (Rat::from(a), Rat::from(b))).collect()
    }

    #[test]
    fn feasibility_examples() {
        let s = PointSet::from_i64(2, &[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        let v = cell_feasible(&s, &ConvexCell::new(vec![set(&[1]), set(&[1])]).unwrap()).unwrap();
        assert_eq!(v.point().unwrap(), s.point(0));
        let c = cell(&[&[1], &[2]]);
        let v = cell_feasible(&s, &c).unwrap();
        assert!(v.point().is_none() && v.verify(&s, &c));

        let ten = gallery::paper_counterexample();
        let c = ConvexCell::new(vec![gallery::counterexample_block(1), gallery::counterexample_block(2)]).unwrap();
        let v = cell_feasible(&ten, &c).unwrap();
        assert!(v.verify(&ten, &c));
        assert!(v.point().unwrap().iter().all(Rat::is_zero));
    }

    #[test]
    fn halfspace_path_certifies_both_ways() {
        let s = gallery::line(8);
        let mut cache = HullCache::new(&s);
        // many hulls push the cell past the joint limit
        let hulls: Vec<IndexSet> = subsets_of_size(8, 7).collect();
        let c = ConvexCell::new(hulls.clone()).unwrap();
        assert!(c.total_size() > JOINT_LIMIT);
        let v = cell_verdict(&mut cache, &c);
        assert!(v.point().is_some() && v.verify(&s, &c));
        let mut more = hulls;
        more.push(set(&[1]));
        let c = ConvexCell::new(more).unwrap();
        let v = cell_verdict(&mut cache, &c);
        assert!(matches!(v, CellVerdict::Empty(CellRefutation::Halfspace(_))));
        assert!(v.verify(&s, &c));
    }

    #[test]
    fn dimension_examples() {
        let line3 = gallery::line(3);
        assert_eq!(cell_dim(&line3, &cell(&[&[1, 2], &[2, 3]])).unwrap(), 0);
        assert_eq!(cell_dim(&line3, &cell(&[&[1], &[3]])).unwrap(), -1);
        let quad = PointSet::from_i64(2, &[&[0, 0], &[3, 0], &[0, 3], &[4, 4]]).unwrap();
        assert_eq!(cell_dim(&quad, &cell(&[&[1, 2, 3, 4]])).unwrap(), 2);
        let flat = PointSet::from_i64(3, &[&[0, 0, 1], &[3, 0, 1], &[0, 3, 1], &[1, 7, 2]]).unwrap();
        assert_eq!(cell_dim(&flat, &cell(&[&[1, 2, 3]])).unwrap(), 2);
        assert_eq!(cell_dim(&flat, &cell(&[&[1, 2, 3], &[2, 4]])).unwrap(), 0);
    }

    #[test]
    fn tverberg_region_examples() {
        let s = gallery::line(4);
        let t1 = tverberg_region(&s, 1).unwrap();
        assert_eq!(t1.cells, vec![cell(&[&[1, 2, 3, 4]])]);
        let t2 = tverberg_region(&s, 2).unwrap();
        assert_eq!(region_intervals_1d(&s, &t2).unwrap(), ivs(&[(1, 2)]));
        assert_eq!(region_dim(&s, &t2).unwrap(), 1);
        assert_eq!(region_dim(&s, &Region::empty()).unwrap(), -1);
        let cross = gallery::cross();
        let t2 = tverberg_region(&cross, 2).unwrap();
        assert_eq!(region_dim(&cross, &t2).unwrap(), 0);
    }

    #[test]
    fn containment_examples() {
        let ten = gallery::paper_counterexample();
        let t2 = tverberg_region(&ten, 2).unwrap();
        let zero = vec![Rat::zero(); 5];
        let m = region_contains(&ten, &t2, &zero).unwrap();
        assert!(m.is_inside() && m.verify(&ten, &t2, &zero));

        let s = gallery::line(4);
        let t2 = tverberg_region(&s, 2).unwrap();
        let out = [Rat::from(7)];
        let m = region_contains(&s, &t2, &out).unwrap();
        assert!(!m.is_inside() && m.verify(&s, &t2, &out));
        let c = &t2.cells[0];
        let w = cell_feasible(&s, c).unwrap();
        assert!(region_contains(&s, &t2, w.point().unwrap()).unwrap().is_inside());
    }

    #[test]
    fn intersection_examples() {
        let s = gallery::line(4);
        let a = Region { cells: vec![cell(&[&[2, 3]])] };
        let b = Region { cells: vec![cell(&[&[3, 4]])] };
        let x = region_intersect(&s, &a, &b).unwrap();
        assert_eq!(region_intervals_1d(&s, &x).unwrap(), ivs(&[(2, 2)]));
        assert!(region_intersect(&s, &a, &Region::empty()).unwrap().is_empty());
        let aa = region_intersect(&s, &a, &a).unwrap();
        assert_eq!(region_intervals_1d(&s, &aa).unwrap(), region_intervals_1d(&s, &a).unwrap());
    }

    #[test]
    fn core_examples() {
        let s = gallery::line(6);
        let c = core_region(&s, 2, 1).unwrap();
        assert_eq!(region_intervals_1d(&s, &c).unwrap(), ivs(&[(2, 3)]));
        let t0 = core_region(&s, 2, 0).unwrap();
        assert_eq!(t0, tverberg_region(&s, 2).unwrap());
        assert!(core_region(&gallery::line(4), 2, 1).unwrap().is_empty());

        let p = [rat(5, 2)];
        let m = core_member(&s, &p, 2, 1).unwrap();
        assert!(m.is_member() && m.verify(&s, &p, 2, 1));
        let m = core_member(&s, &[Rat::zero()], 2, 1).unwrap();
        assert!(!m.is_member() && m.verify(&s, &[Rat::zero()], 2, 1));
    }

    #[test]
    fn counterexample_core_contains_origin() {
        let ten = gallery::paper_counterexample();
        let zero = vec![Rat::zero(); 5];
        let m = core_member(&ten, &zero, 2, 1).unwrap();
        assert!(m.is_member() && m.verify(&ten, &zero, 2, 1));
        let m = core_member(&ten, ten.point(0), 2, 1).unwrap();
        assert!(!m.is_member() && m.verify(&ten, ten.point(0), 2, 1));
    }

    #[test]
    fn cascade_sum_examples() {
        let one = PointSet::from_i64(2, &[&[3, 4]]).unwrap();
        assert_eq!(cascade_sum(&one).unwrap(), CascadeSum { dims: vec![0], sum: 0 });
        let cs = cascade_sum(&gallery::cross()).unwrap();
        assert_eq!(cs.dims, vec![2, 0, 0, -1, -1]);
        assert_eq!(cs.sum, 0);
        let cs = cascade_sum(&gallery::line(4)).unwrap();
        assert_eq!(cs.dims, vec![1, 1, -1, -1]);
    }

    #[test]
    fn compaction_keeps_the_point_set() {
        let s = gallery::line(6);
        let t2 = tverberg_region(&s, 2).unwrap();
        let c = compact_region(&s, &t2).unwrap();
        assert!(c.cells.len() < t2.cells.len());
        assert_eq!(region_intervals_1d(&s, &c).unwrap(), region_intervals_1d(&s, &t2).unwrap());
    }
}
