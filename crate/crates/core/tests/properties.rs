use proptest::prelude::*;

use tverberg_core::cascade::block_decomposition;
use tverberg_core::depth::{centerpoint_cell, rado_check, tukey_depth};
use tverberg_core::flip::{
    core_certificate_from_path, find_flip_path, path_from_three_partition, verify_path, FlipSearch, RadonState,
};
use tverberg_core::partitions::{
    enumerate_partitions, is_tverberg_partition, radon_from_dependence, tverberg_exists, Partition,
};
use tverberg_core::regions::{cell_feasible, core_member, core_region, region_contains, tverberg_region, CellVerdict};
use tverberg_core::{dependence_space, linalg, Mat, PointSet, Rat, Vector};

fn point_set(n: std::ops::RangeInclusive<usize>, d: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, d), n).prop_filter_map("distinct", move |rows| {
        PointSet::new(d, rows.into_iter().map(|r| r.into_iter().map(Rat::from).collect()).collect()).ok()
    })
}

fn invertible(d: usize) -> impl Strategy<Value = (Mat, Vector)> {
    (prop::collection::vec(-3i64..=3, d * d), prop::collection::vec(-5i64..=5, d)).prop_filter_map(
        "singular",
        move |(m, b)| {
            let rows: Vec<Vector> = m.chunks(d).map(|r| r.iter().copied().map(Rat::from).collect()).collect();
            let m = Mat::from_rows(rows);
            (m.rank() == d).then(|| (m, b.into_iter().map(Rat::from).collect()))
        },
    )
}

fn apply(m: &Mat, b: &[Rat], p: &[Rat]) -> Vector {
    linalg::add(&m.mul_vec(p), b)
}

fn samples(s: &PointSet) -> Vec<Vector> {
    let mut out: Vec<Vector> = s.points().to_vec();
    let pts = s.points();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            out.push(linalg::scale(&linalg::add(&pts[i], &pts[j]), &Rat::new(1, 2)));
        }
    }
    let all: Vector = linalg::scale(&s.sum_weighted(&vec![Rat::one(); s.len()]), &Rat::new(1, s.len() as i64));
    out.push(all);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn radon_partition_is_antisymmetric(s in point_set(4..=6, 2)) {
        for alpha in dependence_space(&s).basis {
            let p = radon_from_dependence(&s, &alpha).unwrap();
            let neg: Vector = alpha.iter().map(|a| -a).collect();
            let q = radon_from_dependence(&s, &neg).unwrap();
            prop_assert!(p.verify(&s) && q.verify(&s));
            prop_assert_eq!(p.positive, q.negative);
            prop_assert_eq!(p.negative, q.positive);
            prop_assert_eq!(p.point, q.point);
        }
    }

    #[test]
    fn tverberg_existence_is_monotone(s in point_set(5..=7, 2)) {
        let mut prev = true;
        for r in 1..=4 {
            let found = tverberg_exists(&s, r).unwrap().witness().is_some();
            prop_assert!(prev || !found, "an {}-partition exists without an {}-partition", r, r - 1);
            prev = found;
        }
    }

    #[test]
    fn partitions_are_affine_invariant(s in point_set(4..=5, 2), (m, b) in invertible(2)) {
        let image = s.affine_image(&m, &b).unwrap();
        for p in enumerate_partitions(s.len(), 2) {
            let p = Partition::new(p.parts, s.len()).unwrap();
            let here = is_tverberg_partition(&s, &p).unwrap();
            let there = is_tverberg_partition(&image, &p).unwrap();
            prop_assert!(here.verify(&s) && there.verify(&image));
            prop_assert_eq!(here.witness().is_some(), there.witness().is_some());
            if let (Some(w), Some(v)) = (here.witness(), there.witness()) {
                // the mapped witness lies in every mapped hull
                let mapped = apply(&m, &b, &w.point);
                for part in &v.partition.parts {
                    prop_assert!(tverberg_core::in_convex_hull(&mapped, &image, *part).unwrap().is_feasible());
                }
            }
        }
    }

    #[test]
    fn regions_are_affine_invariant(s in point_set(4..=6, 2), (m, b) in invertible(2)) {
        let image = s.affine_image(&m, &b).unwrap();
        let here = tverberg_region(&s, 2).unwrap();
        let there = tverberg_region(&image, 2).unwrap();
        for p in samples(&s) {
            let a = region_contains(&s, &here, &p).unwrap();
            let q = apply(&m, &b, &p);
            let c = region_contains(&image, &there, &q).unwrap();
            prop_assert!(a.verify(&s, &here, &p) && c.verify(&image, &there, &q));
            prop_assert_eq!(a.is_inside(), c.is_inside());
        }
    }

    #[test]
    fn tverberg_regions_shrink_with_r(s in point_set(5..=7, 2)) {
        let regions: Vec<_> = (1..=3).map(|r| tverberg_region(&s, r).unwrap()).collect();
        for p in samples(&s) {
            let inside: Vec<bool> =
                regions.iter().map(|reg| region_contains(&s, reg, &p).unwrap().is_inside()).collect();
            prop_assert!(inside.windows(2).all(|w| w[0] || !w[1]));
        }
    }

    #[test]
    fn core_member_matches_core_region(s in point_set(5..=6, 2), r in 1usize..=2, t in 1usize..=2) {
        let core = core_region(&s, r, t).unwrap();
        let mut probes = samples(&s);
        for c in &core.cells {
            if let CellVerdict::Member(w) = cell_feasible(&s, c).unwrap() {
                probes.push(w.point);
            }
        }
        for p in probes {
            let direct = core_member(&s, &p, r, t).unwrap();
            let via = region_contains(&s, &core, &p).unwrap();
            prop_assert!(direct.verify(&s, &p, r, t) && via.verify(&s, &core, &p));
            prop_assert_eq!(direct.is_member(), via.is_inside());
        }
    }

    #[test]
    fn centerpoint_cell_matches_core(s in point_set(4..=7, 2), t in 1usize..=2) {
        let cell = centerpoint_cell(&s, t).unwrap();
        let verdict = cell_feasible(&s, &cell).unwrap();
        prop_assert!(verdict.verify(&s, &cell));
        let core = core_region(&s, 1, t).unwrap();
        prop_assert_eq!(verdict.point().is_some(), !core.is_empty());
        let report = rado_check(&s, t).unwrap();
        if let Some(d) = report.depth {
            prop_assert!(d.verify_witness(&s) && d.depth > t);
            prop_assert_eq!(d.depth, tukey_depth(&d.point, &s).unwrap().depth);
        }
    }

    #[test]
    fn blocks_are_affine_invariant(s in point_set(4..=6, 2), (m, b) in invertible(2)) {
        let image = s.affine_image(&m, &b).unwrap();
        if let (Ok(x), Ok(y)) = (block_decomposition(&s), block_decomposition(&image)) {
            prop_assert!(x.verify(&s) && y.verify(&image));
            prop_assert_eq!(x.blocks, y.blocks);
            prop_assert_eq!(x.ignored, y.ignored);
        }
    }

    #[test]
    fn three_partitions_give_flip_paths(s in point_set(7..=8, 2)) {
        let Some(w) = tverberg_exists(&s, 3).unwrap().witness().cloned() else {
            return Ok(());
        };
        let path = path_from_three_partition(&s, &w).unwrap();
        prop_assert!(verify_path(&s, &w.point, &path));
        let back = path.reversed_swapped();
        prop_assert!(verify_path(&s, &w.point, &back));
        if let Ok(cert) = core_certificate_from_path(&s, &w.point, &path) {
            prop_assert!(cert.verify(&s));
            prop_assert!(core_member(&s, &w.point, 2, 1).unwrap().is_member());
        }
    }

    #[test]
    fn searched_paths_reverse(s in point_set(5..=6, 2)) {
        let Some(w) = tverberg_exists(&s, 2).unwrap().witness().cloned() else {
            return Ok(());
        };
        let (a, b) = (w.partition.parts[0], w.partition.parts[1]);
        let y = w.point.clone();
        if let FlipSearch::Found(path) = find_flip_path(&s, &y, RadonState::new(a, b), Some(20_000)).unwrap() {
            prop_assert!(verify_path(&s, &y, &path));
            let back = path.reversed_swapped();
            prop_assert!(verify_path(&s, &y, &back));
            prop_assert_eq!(back.states[0], RadonState::new(b, a));
        }
    }
}
