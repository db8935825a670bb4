//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tverberg_core::cascade::{construct_cascade_partition, verify_cascade_inequality, Branch};
use tverberg_core::depth::{centerpoint_cell, rado_check};
use tverberg_core::flip::verify_paper_example;
use tverberg_core::gallery;
use tverberg_core::lp::{solve_feasibility, verify_certificate, LinearSystem};
use tverberg_core::partitions::{tverberg_exists, tverberg_search, SearchOptions, TverbergSearch};
use tverberg_core::points::affine_span_dim;
use tverberg_core::regions::{
    cell_feasible, core_member, core_region, region_contains, region_intervals_1d, tverberg_region, CellVerdict,
};
use tverberg_core::{linalg, PointSet, Rat, Vector};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_rat(rng: &mut ChaCha8Rng, span: i64, den: i64) -> Rat {
    Rat::new(rng.gen_range(-span..=span), rng.gen_range(1..=den))
}

fn random_set(rng: &mut ChaCha8Rng, n: usize, d: usize, span: i64, den: i64) -> PointSet {
    loop {
        let pts: Vec<Vector> = (0..n).map(|_| (0..d).map(|_| random_rat(rng, span, den)).collect()).collect();
        if let Ok(s) = PointSet::new(d, pts) {
            return s;
        }
    }
}

fn spanning_set(rng: &mut ChaCha8Rng, n: usize, d: usize) -> PointSet {
    loop {
        let s = random_set(rng, n, d, 20, 4);
        if affine_span_dim(&s) == d {
            return s;
        }
    }
}

/// Sorted distinct rationals.
fn sorted_line(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rat> {
    loop {
        let mut v: Vec<Rat> = (0..n).map(|_| random_rat(rng, 30, 7)).collect();
        v.sort();
        v.dedup();
        if v.len() == n {
            return v;
        }
    }
}

fn criterion_1(rng: &mut ChaCha8Rng) -> Outcome {
    let mut sets = 0;
    let mut regions = 0;
    let mut flips_checked = 0;
    for size in 2..=8usize {
        let mut lines: Vec<Vec<Rat>> = vec![(0..size as i64).map(Rat::from).collect()];
        for _ in 0..4 {
            lines.push(sorted_line(rng, size));
        }
        for xs in lines {
            sets += 1;
            let s = PointSet::on_line(&xs).unwrap();
            let n = size - 1;
            // 1-based x_k
            let x = |k: usize| xs[k - 1].clone();
            for r in 1..=size {
                let reg = tverberg_region(&s, r).unwrap();
                let got = region_intervals_1d(&s, &reg).unwrap();
                let want = if 2 * r <= n + 2 { vec![(x(r), x(n + 2 - r))] } else { vec![] };
                ensure(got == want, || format!("T_{r} of {xs:?}: {got:?} != {want:?}"))?;
                regions += 1;
                if want.is_empty() {
                    let opts = SearchOptions { budget: None, keep_refutations: true };
                    match tverberg_search(&s, r, &opts).unwrap() {
                        TverbergSearch::NoneExists { refutations, .. } => {
                            ensure(refutations.iter().all(|f| f.verify(&s)), || "bad refutation".into())?
                        }
                        other => return Err(format!("empty T_{r} but search gave {other:?}")),
                    }
                } else {
                    for p in [x(r), x(n + 2 - r)] {
                        let m = region_contains(&s, &reg, std::slice::from_ref(&p)).unwrap();
                        ensure(m.is_inside() && m.verify(&s, &reg, &[p]), || "endpoint membership".into())?;
                    }
                }
                for t in 1..=3usize.min(size - 1) {
                    let core = core_region(&s, r, t).unwrap();
                    let got = region_intervals_1d(&s, &core).unwrap();
                    let nonempty = n + 2 >= 2 * r + 2 * t;
                    let want = if nonempty { vec![(x(r + t), x(n + 2 - r - t))] } else { vec![] };
                    ensure(got == want, || format!("C^{t}_{r} of {xs:?}: {got:?} != {want:?}"))?;
                    ensure(nonempty == (n >= 2 * (r - 1) + 2 * t), || "flip threshold".into())?;
                    regions += 1;
                    // certified point verdicts on both sides of the interval
                    let probes: Vec<Rat> = if nonempty {
                        vec![x(r + t), x(n + 2 - r - t)]
                    } else {
                        xs.windows(2).map(|w| (&w[0] + &w[1]) * Rat::new(1, 2)).chain(xs.iter().cloned()).collect()
                    };
                    for p in probes {
                        let m = core_member(&s, std::slice::from_ref(&p), r, t).unwrap();
                        ensure(m.is_member() == nonempty && m.verify(&s, &[p], r, t), || "core probe".into())?;
                        flips_checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{sets} sets, {regions} regions, {flips_checked} certified core probes"))
}

fn criterion_2(rng: &mut ChaCha8Rng) -> Outcome {
    let mut total = 0;
    for (r, d) in [(2usize, 2usize), (3, 2), (2, 3)] {
        for _ in 0..50 {
            let s = random_set(rng, (r - 1) * (d + 1) + 1, d, 50, 5);
            match tverberg_exists(&s, r).unwrap() {
                TverbergSearch::Found(w) => ensure(w.verify(&s) && w.partition.len() == r, || "bad witness".into())?,
                other => return Err(format!("no {r}-partition for {:?}: {other:?}", s.points())),
            }
            total += 1;
        }
    }
    Ok(format!("{total} sets, every witness verified"))
}

fn criterion_3() -> Outcome {
    let report = verify_paper_example();
    for c in &report.checks {
        ensure(c.passed, || format!("check '{}' failed: {}", c.name, c.detail))?;
    }
    let s = gallery::paper_counterexample();
    ensure(report.partitions_examined == 9330 && report.refutations.len() == 9330, || {
        format!("{} partitions examined", report.partitions_examined)
    })?;
    ensure(report.refutations.iter().all(|r| r.verify(&s)), || "refutation failed".into())?;
    Ok(format!("5/5 checks, {} refutations verified", report.refutations.len()))
}

fn criterion_4() -> Outcome {
    let mut many = 0;
    let mut split = 0;
    for inst in gallery::curated_cascade() {
        let s = &inst.points;
        let t = inst.t;
        let res = construct_cascade_partition(s, t, false).map_err(|e| format!("{}: {e}", inst.name))?;
        ensure(res.verify(s, t) && res.witness.partition.len() >= t + 2, || format!("{}: witness", inst.name))?;
        let moved = s.translated(&res.origin);
        for id in res.decomposition.identities(&moved) {
            ensure(linalg::is_zero(&id.sum_abs_cx), || format!("{}: Σ|c|x ≠ 0", inst.name))?;
            if res.branch == Branch::SplitCase {
                ensure(id.sum_c.is_zero() && linalg::is_zero(&id.sum_cx), || format!("{}: Σc, Σcx", inst.name))?;
            }
        }
        match res.branch {
            Branch::ManyBlocks => {
                ensure(res.decomposition.blocks.len() >= t + 2, || "block count".into())?;
                if inst.name != "cross" {
                    many += 1;
                }
            }
            Branch::SplitCase => {
                ensure(res.decomposition.blocks.len() == t + 1, || "block count".into())?;
                let all = construct_cascade_partition(s, t, true).map_err(|e| e.to_string())?;
                ensure(all.verify(s, t) && all.witness.partition.len() == 2 * (t + 1), || "split-all".into())?;
                split += 1;
            }
        }
    }
    ensure(many >= 3 && split >= 3, || format!("{many} many-block and {split} split instances"))?;
    Ok(format!("cross + {many} many-block + {split} split (s = t+1) instances"))
}

fn criterion_5() -> Outcome {
    let mut sets: Vec<(String, PointSet)> =
        gallery::curated_cascade().into_iter().map(|c| (c.name, c.points)).collect();
    sets.push(("two points".into(), PointSet::from_i64(2, &[&[0, 0], &[3, 1]]).unwrap()));
    sets.push(("triangle".into(), PointSet::from_i64(2, &[&[0, 0], &[3, 1], &[1, 4]]).unwrap()));
    sets.push(("single point".into(), PointSet::from_i64(3, &[&[1, 2, 3]]).unwrap()));
    for (name, s) in &sets {
        let c = verify_cascade_inequality(s).map_err(|e| format!("{name}: {e}"))?;
        ensure(c.holds && c.sum >= 0, || format!("{name}: sum {}", c.sum))?;
    }
    let cross = verify_cascade_inequality(&gallery::cross()).unwrap();
    ensure(cross.dims == vec![2, 0, 0, -1, -1] && cross.sum == 0, || format!("cross dims {:?}", cross.dims))?;
    Ok(format!("{} instances with sum ≥ 0; cross dims [2,0,0,-1,-1]", sets.len()))
}

fn criterion_6(rng: &mut ChaCha8Rng) -> Outcome {
    let mut total = 0;
    for d in 1..=3usize {
        for t in 1..=3usize {
            for _ in 0..30 {
                let s = spanning_set(rng, t * (d + 1) + 1, d);
                let rep = rado_check(&s, t).unwrap();
                let cell = centerpoint_cell(&s, t).unwrap();
                let w = rep.witness.as_ref().ok_or_else(|| format!("empty core for d={d}, t={t}"))?;
                ensure(w.verify(&s, &cell), || "witness certificate".into())?;
                let depth = rep.depth.as_ref().ok_or("missing depth")?;
                ensure(depth.verify_witness(&s), || "depth witness".into())?;
                ensure(depth.depth > t, || format!("depth {} < {}", depth.depth, t + 1))?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} sets, every witness certified with depth ≥ t+1"))
}

fn criterion_7(rng: &mut ChaCha8Rng) -> Outcome {
    let mut checked = 0;
    let mut in_upper = 0;
    let mut in_core = 0;
    for k in 0..20 {
        let d = 1 + k % 2;
        let n = if d == 1 { 7 } else { 6 };
        let s = random_set(rng, n, d, 10, 2);
        let (r, t) = if k % 4 < 2 { (2usize, 1usize) } else { (1, 2) };
        let low = tverberg_region(&s, r).unwrap();
        let high = tverberg_region(&s, r + t).unwrap();
        let core = core_region(&s, r, t).unwrap();
        let mut probes: Vec<Vector> = Vec::new();
        for c in high.cells.iter().chain(&core.cells).take(30) {
            if let CellVerdict::Member(w) = cell_feasible(&s, c).unwrap() {
                probes.push(w.point);
            }
        }
        probes.extend(s.points().iter().cloned());
        let mut pool: Vec<Vector> = s.points().to_vec();
        pool.shuffle(rng);
        while probes.len() < 100 {
            // random convex combinations of two or three points, plus noise
            let a = &pool[rng.gen_range(0..n)];
            let b = &pool[rng.gen_range(0..n)];
            let lam = Rat::new(rng.gen_range(0..=8), 8);
            let mut p = linalg::add(&linalg::scale(a, &lam), &linalg::scale(b, &(Rat::one() - &lam)));
            if rng.gen_bool(0.3) {
                p = p.iter().map(|v| v + &Rat::new(rng.gen_range(-2..=2), 7)).collect();
            }
            probes.push(p);
        }
        probes.truncate(100);
        for p in &probes {
            let hi = region_contains(&s, &high, p).unwrap();
            let cm = core_member(&s, p, r, t).unwrap();
            let lo = region_contains(&s, &low, p).unwrap();
            let via_region = region_contains(&s, &core, p).unwrap();
            ensure(hi.verify(&s, &high, p) && lo.verify(&s, &low, p), || "region certificate".into())?;
            ensure(cm.verify(&s, p, r, t) && via_region.verify(&s, &core, p), || "core certificate".into())?;
            ensure(!hi.is_inside() || cm.is_member(), || format!("T_{} ⊄ C at {p:?}", r + t))?;
            ensure(!cm.is_member() || lo.is_inside(), || format!("C ⊄ T_{r} at {p:?}"))?;
            ensure(cm.is_member() == via_region.is_inside(), || format!("core_member vs region at {p:?}"))?;
            in_upper += hi.is_inside() as usize;
            in_core += cm.is_member() as usize;
            checked += 1;
        }
    }
    Ok(format!("{checked} points, 0 violations ({in_upper} in T_(r+t), {in_core} in the core)"))
}

fn criterion_8(rng: &mut ChaCha8Rng) -> Outcome {
    let mut feasible = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=5);
        let mut sys = LinearSystem::new(n);
        for j in 0..n {
            if rng.gen_bool(0.25) {
                sys.set_free(j);
            }
        }
        for _ in 0..m {
            let row: Vector = (0..n).map(|_| Rat::from(rng.gen_range(-3..=3i64))).collect();
            sys.add_equality(row, Rat::new(rng.gen_range(-6..=6), rng.gen_range(1..=3)));
        }
        let v = solve_feasibility(&sys);
        ensure(verify_certificate(&sys, &v), || format!("certificate failed for {sys:?}"))?;
        feasible += v.is_feasible() as usize;
    }
    Ok(format!("1000 systems ({feasible} feasible), 0 failures; criteria 1-7 verify their negative certificates"))
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e5b);
    type Run<'a> = Box<dyn FnOnce(&mut ChaCha8Rng) -> Outcome + 'a>;
    let criteria: Vec<(&str, Option<Duration>, Run)> = vec![
        ("1-D closed forms", Some(Duration::from_secs(60)), Box::new(criterion_1)),
        ("Tverberg's theorem at desk scale", None, Box::new(criterion_2)),
        ("ten-point counterexample in R^5", Some(Duration::from_secs(600)), Box::new(|_| criterion_3())),
        ("(t+2)-partition construction", Some(Duration::from_secs(60)), Box::new(|_| criterion_4())),
        ("cascade inequality", Some(Duration::from_secs(60)), Box::new(|_| criterion_5())),
        ("Rado bound", None, Box::new(criterion_6)),
        ("containment chain", None, Box::new(criterion_7)),
        ("certificate soundness", None, Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run(&mut rng);
        let took = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if took > l => Err(format!("took {took:.1?}, limit {l:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{took:.2?}]", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{took:.2?}]", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
