//! Radon flip graphs at a fixed point.
//!
//! A state is an ordered pair `(A, B)` of disjoint nonempty index sets whose
//! hulls both contain the fixed point `y`. A move adds an unused index to one
//! side or removes one. A path from `(A, B)` to `(B, A)` moves every index of
//! `A ∪ B` across, and with single moves each such index is unused at some
//! step; at that step `(A, B)` is a 2-partition of `S` minus that index with
//! `y` in both hulls. If every index of `S` is unused at some step, `y` lies in
//! `C^1_2(S)`.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::error::{Error, Result};
use crate::gallery;
use crate::linalg::Vector;
use crate::lp::{hull_membership, Barycentric};
use crate::partitions::{
    is_tverberg_partition, tverberg_search, Partition, Refutation, SearchOptions, TverbergSearch, TverbergWitness,
};
use crate::points::{IndexSet, PointSet};
use crate::rational::Rat;
use crate::regions::{core_member, CoreMembership, PointOracle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadonState {
    pub a: IndexSet,
    pub b: IndexSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Side {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum MoveKind {
    Add,
    Remove,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FlipMove {
    pub kind: MoveKind,
    pub side: Side,
    pub index: usize,
}

impl RadonState {
    pub fn new(a: IndexSet, b: IndexSet) -> Self {
        RadonState { a, b }
    }

    pub fn swap(self) -> Self {
        RadonState { a: self.b, b: self.a }
    }

    pub fn used(self) -> IndexSet {
        self.a.union(self.b)
    }

    fn well_formed(self) -> bool {
        !self.a.is_empty() && !self.b.is_empty() && self.a.is_disjoint(self.b)
    }

    /// The state after `mv`, if the move is combinatorially legal.
    pub fn apply(self, mv: FlipMove) -> Option<RadonState> {
        let i = mv.index;
        let (side, other) = match mv.side {
            Side::A => (self.a, self.b),
            Side::B => (self.b, self.a),
        };
        let side = match mv.kind {
            MoveKind::Add if !side.contains(i) && !other.contains(i) => side.with(i),
            MoveKind::Remove if side.contains(i) => side.without(i),
            _ => return None,
        };
        let next = match mv.side {
            Side::A => RadonState { a: side, b: other },
            Side::B => RadonState { a: other, b: side },
        };
        next.well_formed().then_some(next)
    }
}

/// Certificates that `y` is in both hulls of a state.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StateCertificate {
    pub a: Barycentric,
    pub b: Barycentric,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FlipPath {
    pub point: Vector,
    pub states: Vec<RadonState>,
    pub moves: Vec<FlipMove>,
    /// One per state.
    pub certificates: Vec<StateCertificate>,
}

impl FlipPath {
    /// The same path walked backwards with the sides exchanged; it runs from
    /// the swapped end state to the swapped start state.
    pub fn reversed_swapped(&self) -> FlipPath {
        let states = self.states.iter().rev().map(|s| s.swap()).collect();
        let moves = self
            .moves
            .iter()
            .rev()
            .map(|m| FlipMove {
                kind: match m.kind {
                    MoveKind::Add => MoveKind::Remove,
                    MoveKind::Remove => MoveKind::Add,
                },
                side: match m.side {
                    Side::A => Side::B,
                    Side::B => Side::A,
                },
                index: m.index,
            })
            .collect();
        let certificates =
            self.certificates.iter().rev().map(|c| StateCertificate { a: c.b.clone(), b: c.a.clone() }).collect();
        FlipPath { point: self.point.clone(), states, moves, certificates }
    }
}

fn certify(oracle: &mut PointOracle<'_>, st: RadonState) -> Option<StateCertificate> {
    if !st.well_formed() {
        return None;
    }
    Some(StateCertificate { a: oracle.barycentric(st.a)?, b: oracle.barycentric(st.b)? })
}

fn check_start(s: &PointSet, y: &[Rat], st: RadonState) -> Result<()> {
    s.check_combinatorial()?;
    s.check_point(y)?;
    s.check_indices(st.used())?;
    if !st.well_formed() {
        return Err(Error::InvalidArgument("state sides must be disjoint and nonempty".into()));
    }
    Ok(())
}

fn moves_from(st: RadonState, n: usize) -> impl Iterator<Item = FlipMove> {
    let used = st.used();
    (0..n).flat_map(move |i| {
        let mut v = Vec::with_capacity(2);
        for side in [Side::A, Side::B] {
            let kind = if !used.contains(i) {
                MoveKind::Add
            } else if (side == Side::A) == st.a.contains(i) {
                MoveKind::Remove
            } else {
                continue;
            };
            v.push(FlipMove { kind, side, index: i });
        }
        v
    })
}

fn neighbors_with(oracle: &mut PointOracle<'_>, n: usize, st: RadonState) -> Vec<(RadonState, FlipMove)> {
    let mut out: Vec<(RadonState, FlipMove)> = moves_from(st, n)
        .filter_map(|mv| st.apply(mv).map(|next| (next, mv)))
        .filter(|(next, _)| oracle.contains(next.a) && oracle.contains(next.b))
        .collect();
    out.sort();
    out
}

/// All states one legal move away from `st`, in canonical order.
pub fn flip_neighbors(s: &PointSet, y: &[Rat], st: RadonState) -> Result<Vec<RadonState>> {
    check_start(s, y, st)?;
    let mut oracle = PointOracle::new(s, y);
    if certify(&mut oracle, st).is_none() {
        return Err(Error::InvalidArgument("the point is not in both hulls of the state".into()));
    }
    Ok(neighbors_with(&mut oracle, s.len(), st).into_iter().map(|(n, _)| n).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FlipSearch {
    Found(FlipPath),
    /// The component of the start state does not contain its swap.
    NotFound {
        explored: u64,
    },
    /// The state budget ran out; nothing is claimed.
    Exhausted {
        explored: u64,
    },
}

impl FlipSearch {
    pub fn path(&self) -> Option<&FlipPath> {
        match self {
            FlipSearch::Found(p) => Some(p),
            _ => None,
        }
    }
}

/// Breadth-first search from `start` to its swap; `budget` bounds the number
/// of expanded states.
pub fn find_flip_path(s: &PointSet, y: &[Rat], start: RadonState, budget: Option<u64>) -> Result<FlipSearch> {
    check_start(s, y, start)?;
    let mut oracle = PointOracle::new(s, y);
    if certify(&mut oracle, start).is_none() {
        return Err(Error::InvalidArgument("the point is not in both hulls of the start state".into()));
    }
    let goal = start.swap();
    let mut parent: BTreeMap<RadonState, Option<(RadonState, FlipMove)>> = BTreeMap::new();
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    let mut explored = 0u64;
    while let Some(st) = queue.pop_front() {
        if budget.is_some_and(|b| explored >= b) {
            return Ok(FlipSearch::Exhausted { explored });
        }
        explored += 1;
        for (next, mv) in neighbors_with(&mut oracle, s.len(), st) {
            if parent.contains_key(&next) {
                continue;
            }
            parent.insert(next, Some((st, mv)));
            if next == goal {
                let mut states = vec![goal];
                let mut moves = Vec::new();
                let mut cur = goal;
                while let Some(Some((prev, mv))) = parent.get(&cur) {
                    states.push(*prev);
                    moves.push(*mv);
                    cur = *prev;
                }
                states.reverse();
                moves.reverse();
                let certificates =
                    states.iter().map(|&st| certify(&mut oracle, st).expect("visited states are valid")).collect();
                return Ok(FlipSearch::Found(FlipPath { point: y.to_vec(), states, moves, certificates }));
            }
            queue.push_back(next);
        }
    }
    Ok(FlipSearch::NotFound { explored })
}

/// Checks every certificate by substitution, every move, and that the end
/// state is the swap of the start state.
pub fn verify_path(s: &PointSet, y: &[Rat], path: &FlipPath) -> bool {
    if path.point != y || y.len() != s.dim() || path.states.is_empty() {
        return false;
    }
    if path.moves.len() + 1 != path.states.len() || path.certificates.len() != path.states.len() {
        return false;
    }
    let all = s.all();
    for (st, cert) in path.states.iter().zip(&path.certificates) {
        if !st.well_formed() || !st.used().is_subset(all) {
            return false;
        }
        if cert.a.indices != st.a || cert.b.indices != st.b || !cert.a.verify(s, y) || !cert.b.verify(s, y) {
            return false;
        }
    }
    for (k, mv) in path.moves.iter().enumerate() {
        if mv.index >= s.len() || path.states[k].apply(*mv) != Some(path.states[k + 1]) {
            return false;
        }
    }
    path.states[0].swap() == *path.states.last().unwrap()
}

/// Deletion of `index` handled at `step`: the state there, extended to a
/// 2-partition of the remaining points, with `y` in both hulls.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoreEntry {
    pub index: usize,
    pub step: usize,
    pub witness: TverbergWitness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoreCertificate {
    pub point: Vector,
    /// One entry per index of the ground set, in index order.
    pub entries: Vec<CoreEntry>,
}

impl CoreCertificate {
    pub fn verify(&self, s: &PointSet) -> bool {
        self.entries.len() == s.len()
            && self.entries.iter().enumerate().all(|(i, e)| {
                e.index == i
                    && e.witness.point == self.point
                    && e.witness.partition.len() == 2
                    && e.witness.partition.unassigned == IndexSet::singleton(i)
                    && e.witness.verify(s)
            })
    }
}

/// For every index, the first step of a verified path at which it is unused.
pub fn core_certificate_from_path(s: &PointSet, y: &[Rat], path: &FlipPath) -> Result<CoreCertificate> {
    if !verify_path(s, y, path) {
        return Err(Error::InvalidArgument("the path does not verify".into()));
    }
    let mut entries = Vec::with_capacity(s.len());
    for i in 0..s.len() {
        let step =
            path.states.iter().position(|st| !st.used().contains(i)).ok_or(Error::IndexNeverFree { index: i })?;
        let st = path.states[step];
        let cert = &path.certificates[step];
        // the unused points other than i join side A with weight zero
        let rest = s.all().difference(st.used()).without(i);
        let a = st.a.union(rest);
        let coefficients_a = a
            .iter()
            .map(|k| match st.a.iter().position(|j| j == k) {
                Some(pos) => cert.a.coefficients[pos].clone(),
                None => Rat::zero(),
            })
            .collect();
        let partition = Partition::new(vec![a, st.b], s.len())?;
        if is_tverberg_partition(s, &partition)?.witness().is_none() {
            return Err(Error::InvalidArgument(format!("deleting index {} leaves no Tverberg pair", i + 1)));
        }
        let witness = TverbergWitness {
            partition,
            point: y.to_vec(),
            coefficients: vec![Barycentric { indices: a, coefficients: coefficients_a }, cert.b.clone()],
        };
        entries.push(CoreEntry { index: i, step, witness });
    }
    Ok(CoreCertificate { point: y.to_vec(), entries })
}

/// Expands a sequence of set-level states into single moves: additions first
/// (those not blocked by the other side), then removals, then the blocked
/// additions. Every intermediate state is certified.
pub fn expand_set_sequence(s: &PointSet, y: &[Rat], seq: &[(IndexSet, IndexSet)]) -> Result<FlipPath> {
    let first = seq.first().ok_or_else(|| Error::InvalidArgument("empty sequence".into()))?;
    let start = RadonState::new(first.0, first.1);
    check_start(s, y, start)?;
    let mut oracle = PointOracle::new(s, y);
    let mut states = vec![start];
    let mut moves = Vec::new();
    let mut cur = start;
    for &(ta, tb) in &seq[1..] {
        let target = RadonState::new(ta, tb);
        let mut planned = Vec::new();
        for i in ta.difference(cur.a).difference(cur.b).iter() {
            planned.push(FlipMove { kind: MoveKind::Add, side: Side::A, index: i });
        }
        for i in tb.difference(cur.b).difference(cur.a).iter() {
            planned.push(FlipMove { kind: MoveKind::Add, side: Side::B, index: i });
        }
        for i in cur.a.difference(ta).iter() {
            planned.push(FlipMove { kind: MoveKind::Remove, side: Side::A, index: i });
        }
        for i in cur.b.difference(tb).iter() {
            planned.push(FlipMove { kind: MoveKind::Remove, side: Side::B, index: i });
        }
        for i in ta.difference(cur.a).intersection(cur.b).iter() {
            planned.push(FlipMove { kind: MoveKind::Add, side: Side::A, index: i });
        }
        for i in tb.difference(cur.b).intersection(cur.a).iter() {
            planned.push(FlipMove { kind: MoveKind::Add, side: Side::B, index: i });
        }
        for mv in planned {
            let next = cur.apply(mv).ok_or_else(|| Error::InvalidArgument("illegal move in expansion".into()))?;
            states.push(next);
            moves.push(mv);
            cur = next;
        }
        if cur != target {
            return Err(Error::InvalidArgument("expansion did not reach the listed state".into()));
        }
    }
    let certificates = states
        .iter()
        .map(|&st| certify(&mut oracle, st))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidArgument("an intermediate state loses the point".into()))?;
    Ok(FlipPath { point: y.to_vec(), states, moves, certificates })
}

/// The path `(A,B) → (A,B∪C) → (A,C) → (A∪B,C) → (B,C) → (B,C∪A) → (B,A)`
/// for a Tverberg 3-partition `(A,B,C)`.
pub fn path_from_three_partition(s: &PointSet, w: &TverbergWitness) -> Result<FlipPath> {
    if w.partition.len() != 3 || !w.verify(s) {
        return Err(Error::InvalidArgument("expected a verified Tverberg 3-partition".into()));
    }
    let (a, b, c) = (w.partition.parts[0], w.partition.parts[1], w.partition.parts[2]);
    let seq = [(a, b), (a, b.union(c)), (a, c), (a.union(b), c), (b, c), (b, c.union(a)), (b, a)];
    expand_set_sequence(s, &w.point, &seq)
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CounterexampleReport {
    pub checks: Vec<CheckOutcome>,
    /// Certificates for `0 ∈ conv X_i`, where they exist.
    pub block_certificates: Vec<Option<Barycentric>>,
    pub path: Option<FlipPath>,
    pub partitions_examined: u64,
    pub refutations: Vec<Refutation>,
    pub core: Option<CoreMembership>,
}

impl CounterexampleReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs the five checks on the ten-point configuration in `R^5`.
pub fn verify_paper_example() -> CounterexampleReport {
    verify_counterexample(&gallery::paper_counterexample())
}

/// The same checks for any ten points in `R^5` with the block structure
/// `X_i = {x_i, x_{i+2}, x_{5+i}}`.
pub fn verify_counterexample(s: &PointSet) -> CounterexampleReport {
    assert!(s.len() == 10 && s.dim() == 5, "ten points in R^5 expected");
    let zero = vec![Rat::zero(); 5];
    let blocks: Vec<IndexSet> = (1..=5).map(gallery::counterexample_block).collect();
    let mut checks = Vec::new();

    let block_certificates: Vec<Option<Barycentric>> =
        blocks.iter().map(|&x| hull_membership(&zero, s, x).expect("valid indices")).collect();
    let missing: Vec<usize> = (1..=5).filter(|&i| block_certificates[i - 1].is_none()).collect();
    checks.push(CheckOutcome {
        name: "origin in every X_i".into(),
        passed: missing.is_empty(),
        detail: if missing.is_empty() { "5 certificates".into() } else { format!("fails for X_{missing:?}") },
    });

    let overlapping: Vec<usize> = (0..5).filter(|&i| !blocks[i].is_disjoint(blocks[(i + 1) % 5])).collect();
    checks.push(CheckOutcome {
        name: "X_i and X_{i+1} disjoint".into(),
        passed: overlapping.is_empty(),
        detail: format!("{} overlapping pairs", overlapping.len()),
    });

    let path = expand_set_sequence(s, &zero, &gallery::counterexample_flip_sequence()).ok();
    let path_ok = path.as_ref().is_some_and(|p| verify_path(s, &zero, p));
    checks.push(CheckOutcome {
        name: "flip sequence verifies".into(),
        passed: path_ok,
        detail: match &path {
            Some(p) => format!("{} single moves", p.moves.len()),
            None => "an intermediate state loses the origin".into(),
        },
    });

    let opts = SearchOptions { budget: None, keep_refutations: true };
    let (passed, detail, examined, refutations) = match tverberg_search(s, 3, &opts).expect("valid set") {
        TverbergSearch::NoneExists { examined, refutations } => {
            let ok = refutations.iter().all(|r| r.verify(s));
            (ok, format!("{examined} partitions refuted"), examined, refutations)
        }
        TverbergSearch::Found(w) => (false, format!("Tverberg 3-partition at {:?}", w.point), 0, Vec::new()),
        TverbergSearch::Exhausted { examined } => (false, "search exhausted".into(), examined, Vec::new()),
    };
    checks.push(CheckOutcome { name: "no Tverberg 3-partition".into(), passed, detail });

    let core = core_member(s, &zero, 2, 1).ok();
    let core_ok = core.as_ref().is_some_and(|c| c.is_member() && c.verify(s, &zero, 2, 1));
    checks.push(CheckOutcome {
        name: "origin in C^1_2".into(),
        passed: core_ok,
        detail: if core_ok { "10 deletions witnessed".into() } else { "some deletion has no pair".into() },
    });

    CounterexampleReport { checks, block_certificates, path, partitions_examined: examined, refutations, core }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn set(v: &[usize]) -> IndexSet {
        v.iter().map(|i| i - 1).collect()
    }

    #[test]
    fn neighbors_of_first_pair() {
        let s = gallery::paper_counterexample();
        let zero = vec![Rat::zero(); 5];
        let x = gallery::counterexample_block;
        let st = RadonState::new(x(1), x(2));
        let ns = flip_neighbors(&s, &zero, st).unwrap();
        // e_5 belongs to X_3 and is unused
        assert!(ns.contains(&RadonState::new(x(1).with(4), x(2))));
        assert!(ns.iter().all(|n| n.a.is_disjoint(n.b)));
    }

    #[test]
    fn illegal_moves_are_excluded() {
        let s = gallery::line(3);
        let y = [Rat::one()];
        let st = RadonState::new(set(&[1, 3]), set(&[2]));
        assert!(st.apply(FlipMove { kind: MoveKind::Remove, side: Side::B, index: 1 }).is_none());
        assert!(st.apply(FlipMove { kind: MoveKind::Add, side: Side::B, index: 0 }).is_none());
        assert!(flip_neighbors(&s, &y, st).unwrap().is_empty());
        assert_eq!(find_flip_path(&s, &y, st, None).unwrap(), FlipSearch::NotFound { explored: 1 });
    }

    #[test]
    fn counterexample_path() {
        let s = gallery::paper_counterexample();
        let zero = vec![Rat::zero(); 5];
        let x = gallery::counterexample_block;
        let expanded = expand_set_sequence(&s, &zero, &gallery::counterexample_flip_sequence()).unwrap();
        assert!(verify_path(&s, &zero, &expanded));
        let cert = core_certificate_from_path(&s, &zero, &expanded).unwrap();
        assert!(cert.verify(&s));

        let found = find_flip_path(&s, &zero, RadonState::new(x(1), x(2)), None).unwrap();
        let p = found.path().unwrap();
        assert!(verify_path(&s, &zero, p));
        assert!(p.moves.len() <= expanded.moves.len());
        let back = p.reversed_swapped();
        assert!(verify_path(&s, &zero, &back));
    }

    #[test]
    fn broken_paths_fail() {
        let s = gallery::paper_counterexample();
        let zero = vec![Rat::zero(); 5];
        let mut p = expand_set_sequence(&s, &zero, &gallery::counterexample_flip_sequence()).unwrap();
        p.certificates[3].a.coefficients[0] = &p.certificates[3].a.coefficients[0] + &Rat::one();
        assert!(!verify_path(&s, &zero, &p));
        let x = gallery::counterexample_block;
        assert!(expand_set_sequence(&s, &zero, &[(x(1), x(2)), (x(1).without(0), x(2))]).is_err());
    }

    #[test]
    fn line_core_from_path() {
        let s = gallery::line(6);
        let y = [rat(5, 2)];
        let start = RadonState::new(set(&[3, 4]), set(&[2, 5]));
        let p = find_flip_path(&s, &y, start, None).unwrap();
        let p = p.path().expect("path exists");
        let cert = core_certificate_from_path(&s, &y, p).unwrap();
        assert!(cert.verify(&s));
        assert!(core_member(&s, &y, 2, 1).unwrap().is_member());
    }

    #[test]
    fn budget_is_reported() {
        let s = gallery::paper_counterexample();
        let zero = vec![Rat::zero(); 5];
        let x = gallery::counterexample_block;
        let r = find_flip_path(&s, &zero, RadonState::new(x(1), x(2)), Some(3)).unwrap();
        assert_eq!(r, FlipSearch::Exhausted { explored: 3 });
    }

    #[test]
    fn three_partition_path() {
        let s = PointSet::from_i64(2, &[&[0, 0], &[6, 0], &[0, 6], &[1, 1], &[5, 1], &[1, 5], &[2, 2]]).unwrap();
        let w = match crate::partitions::tverberg_exists(&s, 3).unwrap() {
            TverbergSearch::Found(w) => w,
            other => panic!("{other:?}"),
        };
        let p = path_from_three_partition(&s, &w).unwrap();
        assert!(verify_path(&s, &w.point, &p));
    }

    #[test]
    fn mutated_counterexample_fails_a_check() {
        let s = gallery::paper_counterexample();
        let mut pts = s.points().to_vec();
        pts[5][0] = Rat::one();
        let m = PointSet::new(5, pts).unwrap();
        let report = verify_counterexample(&m);
        assert!(!report.all_passed());
        assert!(!report.checks[0].passed);
    }
}
