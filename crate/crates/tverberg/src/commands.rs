//! One function per subcommand. Each returns the payload and status; the
//! caller wraps them into a [`Report`].

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;

use tverberg_core::cascade::{construct_cascade_partition, verify_cascade_inequality};
use tverberg_core::depth::{rado_check, tukey_depth};
use tverberg_core::flip::{core_certificate_from_path, find_flip_path, verify_paper_example, FlipSearch, RadonState};
use tverberg_core::gallery;
use tverberg_core::partitions::{
    joint_verdict, radon_from_dependence, stirling2, tverberg_search, SearchOptions, TverbergSearch,
};
use tverberg_core::points::subsets_of_size;
use tverberg_core::regions::{
    cell_feasible, core_member, core_region, region_dim, region_intervals_1d, tverberg_region, Region,
};
use tverberg_core::{affine_span_dim, dependence_space, Error, IndexSet, PointSet, Rat, Vector};

use crate::input::{InputDocument, InputError};
use crate::report::{CellEntry, LineRow, Payload, RegionReport, Report, Status};
use crate::svg;

/// Default partition budget for `tverberg`.
pub const DEFAULT_PARTITION_BUDGET: u64 = 5_000_000;
/// Default state budget for `flip-path`.
pub const DEFAULT_STATE_BUDGET: u64 = 1_000_000;
/// Upper bound on partitions enumerated by `region` and `core`.
pub const REGION_WORK_LIMIT: u128 = 2_000_000;
/// Largest `n` accepted by the `line-n` gallery entry.
pub const LINE_GALLERY_MAX: usize = 12;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::HypothesisViolated(_) | Error::NotNormalized | Error::BlockSumNonzero { .. } => 3,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

pub type Outcome = Result<(Status, Payload), CliError>;

/// Input and arguments shared by the point-set commands.
pub struct Ctx {
    pub doc: InputDocument,
    pub set: PointSet,
}

impl Ctx {
    pub fn new(doc: InputDocument) -> Result<Self, CliError> {
        let set = doc.point_set()?;
        Ok(Ctx { doc, set })
    }
}

/// Runs `f`, times it, re-verifies the payload and assembles the report.
pub fn run(
    command: &str,
    argv: Vec<String>,
    input: Option<InputDocument>,
    f: impl FnOnce() -> Outcome,
) -> Result<Report, CliError> {
    let start = Instant::now();
    let (status, result) = match f() {
        Ok(v) => v,
        Err(e) if e.code == 3 => (Status::HypothesisViolated, Payload::Failure { message: e.message }),
        Err(e) => return Err(e),
    };
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let s = input.as_ref().map(|d| d.point_set()).transpose()?;
    let certificates_verified = result.verify(s.as_ref()).is_ok();
    Ok(Report { command: command.to_string(), argv, input, status, certificates_verified, elapsed_ms, result })
}

fn one_based(s: &PointSet, v: &[usize]) -> Result<IndexSet, CliError> {
    Ok(IndexSet::from_one_based(v, s.len())?)
}

fn check_point(s: &PointSet, p: &[Rat]) -> Result<(), CliError> {
    if p.len() != s.dim() {
        return Err(CliError::usage(format!("point has {} coordinates, expected {}", p.len(), s.dim())));
    }
    Ok(())
}

fn check_r(r: usize) -> Result<(), CliError> {
    if r == 0 {
        return Err(CliError::usage("--r must be at least 1"));
    }
    Ok(())
}

pub fn deps(c: &Ctx) -> Outcome {
    let basis = dependence_space(&c.set).basis;
    Ok((Status::Completed, Payload::Deps { basis, affine_dim: affine_span_dim(&c.set) }))
}

pub fn radon(c: &Ctx) -> Outcome {
    let partitions =
        dependence_space(&c.set).basis.iter().map(|a| radon_from_dependence(&c.set, a)).collect::<Result<_, _>>()?;
    Ok((Status::Completed, Payload::Radon { partitions }))
}

pub fn tverberg(c: &Ctx, r: usize, budget: Option<u64>) -> Outcome {
    check_r(r)?;
    let opts = SearchOptions { budget: Some(budget.unwrap_or(DEFAULT_PARTITION_BUDGET)), keep_refutations: true };
    let search = tverberg_search(&c.set, r, &opts)?;
    let status = match search {
        TverbergSearch::Exhausted { .. } => Status::Exhausted,
        _ => Status::Completed,
    };
    Ok((status, Payload::Tverberg { r, search }))
}

fn region_work(n: usize, r: usize, t: usize) -> u128 {
    let deletions = subsets_of_size(n, t).count() as u128;
    deletions.saturating_mul(stirling2(n - t, r).unwrap_or(u128::MAX))
}

fn region_report(s: &PointSet, r: usize, t: usize, region: Region) -> Result<RegionReport, CliError> {
    let cells = region
        .cells
        .par_iter()
        .map(|cell| Ok(CellEntry { cell: cell.clone(), verdict: cell_feasible(s, cell)? }))
        .collect::<Result<Vec<_>, Error>>()?;
    let dim = region_dim(s, &region)?;
    let intervals = if s.dim() == 1 { Some(region_intervals_1d(s, &region)?) } else { None };
    let refutations = if region.is_empty() && t == 0 {
        let opts = SearchOptions { budget: None, keep_refutations: true };
        match tverberg_search(s, r, &opts)? {
            TverbergSearch::NoneExists { refutations, .. } => Some(refutations),
            _ => None,
        }
    } else {
        None
    };
    Ok(RegionReport { r, t, cells, dim, intervals, refutations })
}

pub fn region(c: &Ctx, r: usize) -> Outcome {
    check_r(r)?;
    if region_work(c.set.len(), r, 0) > REGION_WORK_LIMIT {
        return Err(CliError::usage(format!(
            "T_{r} of {} points needs more than {REGION_WORK_LIMIT} partitions; use `tverberg` for existence",
            c.set.len()
        )));
    }
    let reg = tverberg_region(&c.set, r)?;
    Ok((Status::Completed, Payload::Region(region_report(&c.set, r, 0, reg)?)))
}

pub fn core(c: &Ctx, r: usize, t: usize) -> Outcome {
    check_r(r)?;
    if t >= c.set.len() {
        return Err(CliError::usage("--t must be smaller than the number of points"));
    }
    if region_work(c.set.len(), r, t) > REGION_WORK_LIMIT {
        return Err(CliError::usage(format!(
            "C^{t}_{r} of {} points needs more than {REGION_WORK_LIMIT} partitions; use `core-member` for point queries",
            c.set.len()
        )));
    }
    let reg = core_region(&c.set, r, t)?;
    Ok((Status::Completed, Payload::Region(region_report(&c.set, r, t, reg)?)))
}

pub fn core_member_cmd(c: &Ctx, r: usize, t: usize, point: Vector) -> Outcome {
    check_r(r)?;
    check_point(&c.set, &point)?;
    let membership = core_member(&c.set, &point, r, t)?;
    Ok((Status::Completed, Payload::CoreMember { r, t, point, membership }))
}

pub fn cascade_check(s: &PointSet) -> Outcome {
    let inequality = verify_cascade_inequality(s)?;
    let mut witnesses = Vec::new();
    let mut first_empty = None;
    let opts = SearchOptions { budget: None, keep_refutations: true };
    for r in 1..=s.len() {
        match tverberg_search(s, r, &opts)? {
            TverbergSearch::Found(w) => witnesses.push(w),
            TverbergSearch::NoneExists { refutations, .. } => {
                first_empty = Some((r, refutations));
                break;
            }
            TverbergSearch::Exhausted { .. } => unreachable!("no budget"),
        }
    }
    Ok((Status::Completed, Payload::CascadeCheck { inequality, witnesses, first_empty }))
}

pub fn cascade_construct(s: &PointSet, t: usize, split_all: bool) -> Outcome {
    let result = construct_cascade_partition(s, t, split_all)?;
    Ok((Status::Completed, Payload::CascadeConstruct { t, split_all, result }))
}

pub fn flip_path(c: &Ctx, a: &[usize], b: &[usize], point: Option<Vector>, budget: Option<u64>) -> Outcome {
    let s = &c.set;
    let (a, b) = (one_based(s, a)?, one_based(s, b)?);
    if a.is_empty() || b.is_empty() || !a.is_disjoint(b) {
        return Err(CliError::usage("--start-a and --start-b must be disjoint and nonempty"));
    }
    let point = match point {
        Some(p) => {
            check_point(s, &p)?;
            p
        }
        None => {
            let (verdict, _) = joint_verdict(s, &[a, b]);
            match verdict.witness() {
                Some(w) => w.assignment[..s.dim()].to_vec(),
                None => return Err(CliError { code: 3, message: "the hulls of the start sides do not meet".into() }),
            }
        }
    };
    let start = RadonState::new(a, b);
    let search = match find_flip_path(s, &point, start, Some(budget.unwrap_or(DEFAULT_STATE_BUDGET))) {
        Err(Error::InvalidArgument(m)) => return Err(CliError { code: 3, message: m }),
        other => other?,
    };
    let core = search.path().and_then(|p| core_certificate_from_path(s, &point, p).ok());
    let status = match search {
        FlipSearch::Exhausted { .. } => Status::Exhausted,
        _ => Status::Completed,
    };
    Ok((status, Payload::FlipPath { point, start, search, core }))
}

pub fn depth(c: &Ctx, point: Vector) -> Outcome {
    check_point(&c.set, &point)?;
    let report = match tukey_depth(&point, &c.set) {
        Err(e @ Error::DimensionTooLarge { .. }) => return Err(CliError { code: 3, message: e.to_string() }),
        other => other?,
    };
    Ok((Status::Completed, Payload::Depth { report }))
}

pub fn rado(c: &Ctx, t: usize) -> Outcome {
    if t >= c.set.len() {
        return Err(CliError::usage("--t must be smaller than the number of points"));
    }
    let report = rado_check(&c.set, t)?;
    Ok((Status::Completed, Payload::Rado { report }))
}

/// 1-D table of `T_r` and `C^t_r` against the closed forms, with certified
/// endpoints.
pub fn line_table(s: &PointSet) -> Result<Vec<LineRow>, CliError> {
    let mut xs: Vec<Rat> = s.points().iter().map(|p| p[0].clone()).collect();
    xs.sort();
    let n = xs.len() - 1;
    let mut rows = Vec::new();
    for r in 1..=xs.len() {
        for t in 0..=3.min(xs.len() - 1) {
            let reg = core_region(s, r, t)?;
            let computed = region_intervals_1d(s, &reg)?.first().cloned();
            let formula = (n + 2 >= 2 * (r + t)).then(|| (xs[r + t - 1].clone(), xs[n + 1 - r - t].clone()));
            let endpoints = match &computed {
                Some((lo, hi)) => vec![
                    core_member(s, std::slice::from_ref(lo), r, t)?,
                    core_member(s, std::slice::from_ref(hi), r, t)?,
                ],
                None => Vec::new(),
            };
            rows.push(LineRow { r, t, computed, formula, endpoints });
        }
    }
    Ok(rows)
}

/// Looks up a named instance.
pub fn gallery_input(name: &str) -> Result<InputDocument, CliError> {
    let unknown = || CliError::usage(format!("unknown gallery name '{name}'; known: {}", gallery::names().join(", ")));
    if let Some(n) = name.strip_prefix("line-") {
        let n: usize = n.parse().map_err(|_| unknown())?;
        if !(1..=LINE_GALLERY_MAX).contains(&n) {
            return Err(CliError::usage(format!("line-n needs 1 ≤ n ≤ {LINE_GALLERY_MAX}")));
        }
    }
    let s = gallery::by_name(name).ok_or_else(unknown)?;
    Ok(InputDocument::from_point_set(&s))
}

/// Canonical checks of a named instance already resolved by [`gallery_input`].
pub fn gallery_checks(name: &str, s: &PointSet) -> Outcome {
    let sections = if name == "paper-counterexample" {
        vec![Payload::Counterexample { report: verify_paper_example() }]
    } else if name.starts_with("line-") {
        vec![Payload::LineTable { rows: line_table(s)? }]
    } else {
        let t = match name.strip_prefix("curated-cascade-").and_then(|k| k.parse().ok()) {
            Some(k) => gallery::curated_cascade_instance(k).map_or(1, |inst| inst.t),
            None => 1,
        };
        vec![cascade_check(s)?.1, cascade_construct(s, t, false)?.1]
    };
    let status = match &sections[..] {
        [Payload::Counterexample { report }] if !report.all_passed() => Status::HypothesisViolated,
        _ => Status::Completed,
    };
    Ok((status, Payload::Gallery { name: name.to_string(), sections }))
}

pub fn plot(c: &Ctx, r: usize, path: &std::path::Path) -> Outcome {
    check_r(r)?;
    if c.set.dim() != 2 {
        return Err(CliError::usage(format!("plot needs points in R^2, got R^{}", c.set.dim())));
    }
    let witness =
        tverberg_search(&c.set, r, &SearchOptions { budget: Some(DEFAULT_PARTITION_BUDGET), keep_refutations: false })?
            .witness()
            .cloned();
    let mut cell_points: Vec<Vector> = if region_work(c.set.len(), r, 0) <= REGION_WORK_LIMIT {
        let reg = tverberg_region(&c.set, r)?;
        reg.cells.par_iter().filter_map(|cell| cell_feasible(&c.set, cell).ok()?.point().map(<[Rat]>::to_vec)).collect()
    } else {
        Vec::new()
    };
    cell_points.sort();
    cell_points.dedup();
    let doc = svg::render(&c.doc, &c.set, r, witness.as_ref(), &cell_points);
    std::fs::write(path, doc).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
    Ok((
        Status::Completed,
        Payload::Plot { path: path.display().to_string(), r, witness, cells_drawn: cell_points.len() },
    ))
}
