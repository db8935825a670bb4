//! Report documents and their independent re-verification.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use tverberg_core::cascade::{verify_cascade_inequality, CascadeInequality, CascadeResult};
use tverberg_core::depth::{centerpoint_cell, tukey_depth, DepthReport, RadoReport};
use tverberg_core::flip::{find_flip_path, verify_path, CoreCertificate, CounterexampleReport, FlipSearch, RadonState};
use tverberg_core::gallery;
use tverberg_core::partitions::{stirling2, RadonPartition, Refutation, TverbergSearch, TverbergWitness};
use tverberg_core::points::is_dependence;
use tverberg_core::regions::{core_region, region_dim, tverberg_region, CellVerdict, ConvexCell, CoreMembership};
use tverberg_core::{affine_span_dim, linalg, IndexSet, PointSet, Rat, Vector};

use crate::input::InputDocument;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Completed,
    HypothesisViolated,
    /// A search budget ran out; no verdict is claimed.
    Exhausted,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Completed => 0,
            Status::HypothesisViolated => 3,
            Status::Exhausted => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub argv: Vec<String>,
    pub input: Option<InputDocument>,
    pub status: Status,
    /// Result of re-checking every embedded certificate before output.
    pub certificates_verified: bool,
    pub elapsed_ms: u64,
    pub result: Payload,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellEntry {
    pub cell: ConvexCell,
    pub verdict: CellVerdict,
}

/// `T_r` when `t = 0`, otherwise the core `C^t_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionReport {
    pub r: usize,
    pub t: usize,
    pub cells: Vec<CellEntry>,
    pub dim: i64,
    /// Merged intervals, for points on a line.
    pub intervals: Option<Vec<(Rat, Rat)>>,
    /// Every `r`-partition refuted, when `T_r` is empty.
    pub refutations: Option<Vec<Refutation>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineRow {
    pub r: usize,
    pub t: usize,
    pub computed: Option<(Rat, Rat)>,
    pub formula: Option<(Rat, Rat)>,
    /// Membership certificates for both endpoints of a nonempty interval.
    pub endpoints: Vec<CoreMembership>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Deps {
        basis: Vec<Vector>,
        affine_dim: usize,
    },
    Radon {
        partitions: Vec<RadonPartition>,
    },
    Tverberg {
        r: usize,
        search: TverbergSearch,
    },
    Region(RegionReport),
    CoreMember {
        r: usize,
        t: usize,
        point: Vector,
        membership: CoreMembership,
    },
    CascadeCheck {
        inequality: CascadeInequality,
        /// A certified `r`-partition for each nonempty `T_r`.
        witnesses: Vec<TverbergWitness>,
        /// Refutations of every partition for the first empty `T_r`.
        first_empty: Option<(usize, Vec<Refutation>)>,
    },
    CascadeConstruct {
        t: usize,
        split_all: bool,
        result: CascadeResult,
    },
    FlipPath {
        point: Vector,
        start: RadonState,
        search: FlipSearch,
        core: Option<CoreCertificate>,
    },
    Depth {
        report: DepthReport,
    },
    Rado {
        report: RadoReport,
    },
    Counterexample {
        report: CounterexampleReport,
    },
    LineTable {
        rows: Vec<LineRow>,
    },
    Gallery {
        name: String,
        sections: Vec<Payload>,
    },
    Plot {
        path: String,
        r: usize,
        witness: Option<TverbergWitness>,
        cells_drawn: usize,
    },
    Failure {
        message: String,
    },
}

impl Report {
    /// Re-checks the document without trusting any recorded flag.
    pub fn verify(&self) -> Result<(), String> {
        let s = match &self.input {
            Some(doc) => Some(doc.point_set().map_err(|e| e.to_string())?),
            None => None,
        };
        self.result.verify(s.as_ref())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = match self.status {
            Status::Completed => "completed",
            Status::HypothesisViolated => "hypothesis violated",
            Status::Exhausted => "search exhausted, no verdict",
        };
        let _ = writeln!(out, "command: {}", self.argv.join(" "));
        if let Some(doc) = &self.input {
            let _ = writeln!(out, "input: {} points in R^{}", doc.points.len(), doc.dim);
        }
        let _ = writeln!(out, "status: {status}");
        let _ = writeln!(out, "certificates: {}", if self.certificates_verified { "verified" } else { "NOT verified" });
        let _ = writeln!(out, "time: {} ms", self.elapsed_ms);
        self.result.render(&mut out, self.input.as_ref());
        out
    }
}

fn fail(msg: impl Into<String>) -> Result<(), String> {
    Err(msg.into())
}

fn need(s: Option<&PointSet>) -> Result<&PointSet, String> {
    s.ok_or_else(|| "the report has no input point set".to_string())
}

/// Checks that `refs` refute every unordered `r`-partition of `s` exactly once.
fn verify_all_refuted(s: &PointSet, r: usize, refs: &[Refutation]) -> Result<(), String> {
    let total = stirling2(s.len(), r).ok_or("partition count overflows")?;
    if refs.len() as u128 != total {
        return fail(format!("{} refutations for {} partitions", refs.len(), total));
    }
    let mut seen = BTreeSet::new();
    for f in refs {
        let mut parts = f.parts.clone();
        parts.sort();
        let union = parts.iter().fold(IndexSet::empty(), |u, &p| u.union(p));
        let total_len: usize = parts.iter().map(|p| p.len()).sum();
        if parts.len() != r || union != s.all() || total_len != s.len() || !seen.insert(parts) {
            return fail("refutations do not cover each partition exactly once");
        }
    }
    if !refs.par_iter().all(|f| f.verify(s)) {
        return fail("a refutation certificate does not verify");
    }
    Ok(())
}

fn verify_region(s: &PointSet, rep: &RegionReport) -> Result<(), String> {
    for e in &rep.cells {
        if !e.verdict.verify(s, &e.cell) {
            return fail("a cell verdict does not verify");
        }
    }
    // the cell list and dimension carry no certificate; recompute them
    let region =
        if rep.t == 0 { tverberg_region(s, rep.r) } else { core_region(s, rep.r, rep.t) }.map_err(|e| e.to_string())?;
    let cells: Vec<&ConvexCell> = rep.cells.iter().map(|e| &e.cell).collect();
    if region.cells.iter().collect::<Vec<_>>() != cells {
        return fail("cell list differs from a fresh computation");
    }
    if region_dim(s, &region).map_err(|e| e.to_string())? != rep.dim {
        return fail("dimension differs from a fresh computation");
    }
    if rep.cells.is_empty() && rep.t == 0 {
        verify_all_refuted(s, rep.r, rep.refutations.as_deref().ok_or("empty T_r without refutations")?)?;
    }
    Ok(())
}

fn verify_witness_list(s: &PointSet, r: usize, w: &TverbergWitness) -> Result<(), String> {
    if w.partition.len() != r || !w.verify(s) {
        return fail(format!("{r}-partition witness does not verify"));
    }
    Ok(())
}

impl Payload {
    pub fn verify(&self, s: Option<&PointSet>) -> Result<(), String> {
        match self {
            Payload::Deps { basis, affine_dim } => {
                let s = need(s)?;
                if !basis.iter().all(|a| is_dependence(s, a)) || linalg::rank_of(basis, s.len()) != basis.len() {
                    return fail("basis vectors are not independent dependences");
                }
                if *affine_dim != affine_span_dim(s) || basis.len() + 1 + affine_dim != s.len() {
                    return fail("basis size does not match the rank count");
                }
                Ok(())
            }
            Payload::Radon { partitions } => {
                let s = need(s)?;
                if partitions.is_empty() && affine_span_dim(s) + 1 != s.len() {
                    return fail("no Radon partition listed for a dependent set");
                }
                if !partitions.iter().all(|p| p.verify(s)) {
                    return fail("a Radon partition does not verify");
                }
                Ok(())
            }
            Payload::Tverberg { r, search } => {
                let s = need(s)?;
                match search {
                    TverbergSearch::Found(w) => verify_witness_list(s, *r, w),
                    TverbergSearch::NoneExists { refutations, .. } => verify_all_refuted(s, *r, refutations),
                    TverbergSearch::Exhausted { .. } => Ok(()),
                }
            }
            Payload::Region(rep) => verify_region(need(s)?, rep),
            Payload::CoreMember { r, t, point, membership } => {
                if !membership.verify(need(s)?, point, *r, *t) {
                    return fail("core membership certificate does not verify");
                }
                Ok(())
            }
            Payload::CascadeCheck { inequality, witnesses, first_empty } => {
                let s = need(s)?;
                if verify_cascade_inequality(s).map_err(|e| e.to_string())? != *inequality {
                    return fail("cascade dimensions differ from a fresh computation");
                }
                if witnesses.len() != inequality.largest_nonempty {
                    return fail("missing partition witnesses");
                }
                for (k, w) in witnesses.iter().enumerate() {
                    verify_witness_list(s, k + 1, w)?;
                }
                match first_empty {
                    Some((r, refs)) if *r == inequality.largest_nonempty + 1 => verify_all_refuted(s, *r, refs),
                    None if inequality.largest_nonempty == s.len() => Ok(()),
                    _ => fail("first empty region is not certified"),
                }
            }
            Payload::CascadeConstruct { t, result, .. } => {
                let s = need(s)?;
                if !result.verify(s, *t) || !result.decomposition.verify(s) {
                    return fail("constructed partition does not verify");
                }
                Ok(())
            }
            Payload::FlipPath { point, start, search, core } => {
                let s = need(s)?;
                match search {
                    FlipSearch::Found(path) => {
                        let ends_ok = path.states.first() == Some(start) && path.states.last() == Some(&start.swap());
                        if !ends_ok || !verify_path(s, point, path) {
                            return fail("flip path does not verify");
                        }
                        if let Some(c) = core {
                            if c.point != *point || !c.verify(s) {
                                return fail("core certificate does not verify");
                            }
                        }
                        Ok(())
                    }
                    FlipSearch::NotFound { .. } => {
                        // no certificate for absence; rerun the search without a budget
                        match find_flip_path(s, point, *start, None).map_err(|e| e.to_string())? {
                            FlipSearch::NotFound { .. } => Ok(()),
                            _ => fail("a fresh search finds a path"),
                        }
                    }
                    FlipSearch::Exhausted { .. } => Ok(()),
                }
            }
            Payload::Depth { report } => {
                let s = need(s)?;
                if !report.verify_witness(s) {
                    return fail("depth halfspace does not verify");
                }
                if tukey_depth(&report.point, s).map_err(|e| e.to_string())?.depth != report.depth {
                    return fail("depth differs from a fresh computation");
                }
                Ok(())
            }
            Payload::Rado { report } => {
                let s = need(s)?;
                let cell = centerpoint_cell(s, report.t).map_err(|e| e.to_string())?;
                let ok = match (&report.witness, &report.refutation) {
                    (Some(w), None) => w.verify(s, &cell),
                    (None, Some(r)) => r.verify(s, &cell),
                    _ => false,
                };
                if !ok || report.bound_met != (s.len() > report.t * (s.dim() + 1)) {
                    return fail("centerpoint cell verdict does not verify");
                }
                if let Some(d) = &report.depth {
                    Payload::Depth { report: d.clone() }.verify(Some(s))?;
                }
                Ok(())
            }
            Payload::Counterexample { report } => {
                let s = match s {
                    Some(s) => s.clone(),
                    None => gallery::paper_counterexample(),
                };
                let zero = vec![Rat::zero(); 5];
                let blocks_ok = report.block_certificates.iter().enumerate().all(|(i, c)| {
                    c.as_ref().is_some_and(|c| c.indices == gallery::counterexample_block(i + 1) && c.verify(&s, &zero))
                });
                let path_ok = report.path.as_ref().is_some_and(|p| verify_path(&s, &zero, p));
                let core_ok = report.core.as_ref().is_some_and(|m| m.is_member() && m.verify(&s, &zero, 2, 1));
                if report.all_passed() && !(blocks_ok && path_ok && core_ok) {
                    return fail("a passed check lacks a verifying certificate");
                }
                if report.all_passed() {
                    verify_all_refuted(&s, 3, &report.refutations)?;
                }
                Ok(())
            }
            Payload::LineTable { rows } => {
                let s = need(s)?;
                let mut xs: Vec<Rat> = s.points().iter().map(|p| p[0].clone()).collect();
                xs.sort();
                let n = xs.len() - 1;
                for row in rows {
                    let nonempty = n + 2 >= 2 * (row.r + row.t);
                    let formula = nonempty.then(|| (xs[row.r + row.t - 1].clone(), xs[n + 1 - row.r - row.t].clone()));
                    if formula != row.formula || row.computed != row.formula {
                        return fail(format!("row r={}, t={} does not match the closed form", row.r, row.t));
                    }
                    if let Some((lo, hi)) = &row.formula {
                        let certified = row.endpoints.len() == 2
                            && row
                                .endpoints
                                .iter()
                                .zip([lo, hi])
                                .all(|(m, x)| m.is_member() && m.verify(s, std::slice::from_ref(x), row.r, row.t));
                        if !certified {
                            return fail("interval endpoints are not certified");
                        }
                    }
                }
                Ok(())
            }
            Payload::Gallery { sections, .. } => sections.iter().try_for_each(|p| p.verify(s)),
            Payload::Plot { witness, r, .. } => match witness {
                Some(w) => verify_witness_list(need(s)?, *r, w),
                None => Ok(()),
            },
            Payload::Failure { .. } => Ok(()),
        }
    }

    fn render(&self, out: &mut String, doc: Option<&InputDocument>) {
        let label = |i: usize| doc.map_or_else(|| (i + 1).to_string(), |d| d.label(i));
        let set = |x: IndexSet| format!("{{{}}}", x.iter().map(label).collect::<Vec<_>>().join(","));
        let vec = |v: &[Rat]| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));
        match self {
            Payload::Deps { basis, affine_dim } => {
                let _ = writeln!(out, "affine dimension {affine_dim}, dependence space dimension {}", basis.len());
                for a in basis {
                    let _ = writeln!(out, "  {}", vec(a));
                }
            }
            Payload::Radon { partitions } => {
                if partitions.is_empty() {
                    let _ = writeln!(out, "affinely independent: no Radon partition");
                }
                for p in partitions {
                    let _ = writeln!(out, "{} | {} meet at {}", set(p.positive), set(p.negative), vec(&p.point));
                }
            }
            Payload::Tverberg { r, search } => match search {
                TverbergSearch::Found(w) => {
                    let parts: Vec<String> = w.partition.parts.iter().map(|&p| set(p)).collect();
                    let _ = writeln!(out, "Tverberg {r}-partition {} at {}", parts.join(" "), vec(&w.point));
                }
                TverbergSearch::NoneExists { examined, .. } => {
                    let _ = writeln!(out, "no {r}-partition: {examined} partitions refuted");
                }
                TverbergSearch::Exhausted { examined } => {
                    let _ = writeln!(out, "budget exhausted after {examined} partitions");
                }
            },
            Payload::Region(rep) => {
                let name = if rep.t == 0 { format!("T_{}", rep.r) } else { format!("C^{}_{}", rep.t, rep.r) };
                if rep.cells.is_empty() {
                    let _ = writeln!(out, "{name} is empty");
                } else {
                    let _ = writeln!(out, "{name}: {} cells, dimension {}", rep.cells.len(), rep.dim);
                }
                if let Some(iv) = &rep.intervals {
                    for (lo, hi) in iv {
                        let _ = writeln!(out, "  [{lo}, {hi}]");
                    }
                }
                for e in rep.cells.iter().take(20) {
                    let hulls: Vec<String> = e.cell.hulls.iter().map(|&h| set(h)).collect();
                    let p = e.verdict.point().map(vec).unwrap_or_default();
                    let _ = writeln!(out, "  cell {} contains {p}", hulls.join(" "));
                }
                if rep.cells.len() > 20 {
                    let _ = writeln!(out, "  ... {} more cells", rep.cells.len() - 20);
                }
            }
            Payload::CoreMember { r, t, point, membership } => match membership {
                CoreMembership::Member { witnesses } => {
                    let _ = writeln!(out, "{} is in C^{t}_{r}: {} deletions witnessed", vec(point), witnesses.len());
                }
                CoreMembership::NotMember { deleted, .. } => {
                    let _ = writeln!(out, "{} is not in C^{t}_{r}: delete {}", vec(point), set(*deleted));
                }
            },
            Payload::CascadeCheck { inequality, .. } => {
                let _ = writeln!(
                    out,
                    "dim T_r for r = 1..: {:?}, sum {} ({})",
                    inequality.dims,
                    inequality.sum,
                    if inequality.holds { "inequality holds" } else { "inequality FAILS" }
                );
            }
            Payload::CascadeConstruct { result, .. } => {
                let parts: Vec<String> = result.witness.partition.parts.iter().map(|&p| set(p)).collect();
                let blocks: Vec<String> = result.decomposition.blocks.iter().map(|&b| set(b)).collect();
                let _ = writeln!(out, "Radon point {}", vec(&result.origin));
                let _ = writeln!(out, "blocks {} ({:?})", blocks.join(" "), result.branch);
                let _ = writeln!(out, "partition into {} parts: {}", parts.len(), parts.join(" "));
            }
            Payload::FlipPath { point, search, core, .. } => match search {
                FlipSearch::Found(path) => {
                    let _ = writeln!(out, "flip path at {} with {} moves", vec(point), path.moves.len());
                    for st in &path.states {
                        let _ = writeln!(out, "  {} | {}", set(st.a), set(st.b));
                    }
                    if core.is_some() {
                        let _ = writeln!(out, "every point is unused somewhere: {} is in C^1_2", vec(point));
                    }
                }
                FlipSearch::NotFound { explored } => {
                    let _ = writeln!(out, "no flip path: all {explored} reachable states explored");
                }
                FlipSearch::Exhausted { explored } => {
                    let _ = writeln!(out, "budget exhausted after {explored} states");
                }
            },
            Payload::Depth { report } => {
                let _ = writeln!(out, "depth of {} is {}", vec(&report.point), report.depth);
            }
            Payload::Rado { report } => {
                match &report.witness {
                    Some(w) => {
                        let _ = writeln!(out, "C^{}_1 is nonempty, contains {}", report.t, vec(&w.point));
                    }
                    None => {
                        let _ = writeln!(out, "C^{}_1 is empty", report.t);
                    }
                }
                if let Some(d) = &report.depth {
                    let _ = writeln!(out, "witness depth {}", d.depth);
                }
            }
            Payload::Counterexample { report } => {
                for c in &report.checks {
                    let _ = writeln!(out, "[{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
                }
            }
            Payload::LineTable { rows } => {
                for row in rows {
                    let show = |iv: &Option<(Rat, Rat)>| match iv {
                        Some((a, b)) => format!("[{a}, {b}]"),
                        None => "empty".into(),
                    };
                    let _ = writeln!(
                        out,
                        "r={} t={}: {} (closed form {})",
                        row.r,
                        row.t,
                        show(&row.computed),
                        show(&row.formula)
                    );
                }
            }
            Payload::Gallery { name, sections } => {
                let _ = writeln!(out, "gallery instance {name}");
                for p in sections {
                    p.render(out, doc);
                }
            }
            Payload::Plot { path, cells_drawn, witness, .. } => {
                let _ = writeln!(
                    out,
                    "wrote {path}: {} witness partition, {cells_drawn} cell points",
                    if witness.is_some() { "with" } else { "no" }
                );
            }
            Payload::Failure { message } => {
                let _ = writeln!(out, "{message}");
            }
        }
    }
}
