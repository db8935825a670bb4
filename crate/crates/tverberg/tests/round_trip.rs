use tverberg::commands::{self, Ctx, Outcome};
use tverberg::input::InputDocument;
use tverberg::Report;
use tverberg_core::{gallery, PointSet, Rat};

fn ctx(s: &PointSet) -> Ctx {
    Ctx::new(InputDocument::from_point_set(s)).unwrap()
}

fn round_trip(name: &str, c: &Ctx, f: impl FnOnce() -> Outcome) {
    let report = commands::run(name, vec![name.into()], Some(c.doc.clone()), f).unwrap();
    assert!(report.certificates_verified, "{name}");
    let back = Report::from_json(&report.to_json()).unwrap();
    assert_eq!(back, report, "{name}");
    assert_eq!(back.verify(), Ok(()), "{name}");
}

#[test]
fn every_payload_survives_json() {
    let cross = ctx(&gallery::cross());
    let line = ctx(&gallery::line(6));
    let seven = ctx(&PointSet::from_i64(2, &[&[0, 0], &[6, 0], &[0, 6], &[1, 1], &[5, 0], &[2, 3], &[3, 1]]).unwrap());

    round_trip("deps", &cross, || commands::deps(&cross));
    round_trip("radon", &cross, || commands::radon(&cross));
    round_trip("tverberg", &seven, || commands::tverberg(&seven, 3, None));
    round_trip("tverberg", &cross, || commands::tverberg(&cross, 4, None));
    round_trip("region", &cross, || commands::region(&cross, 2));
    round_trip("region", &line, || commands::region(&line, 4));
    round_trip("core", &line, || commands::core(&line, 2, 1));
    round_trip("core", &line, || commands::core(&line, 2, 2));
    round_trip("core-member", &line, || commands::core_member_cmd(&line, 2, 1, vec![Rat::new(5, 2)]));
    round_trip("core-member", &line, || commands::core_member_cmd(&line, 2, 1, vec![Rat::from(5)]));
    round_trip("cascade-check", &cross, || commands::cascade_check(&cross.set));
    round_trip("cascade-construct", &cross, || commands::cascade_construct(&cross.set, 1, false));
    round_trip("flip-path", &seven, || commands::flip_path(&seven, &[1, 2], &[3, 4], None, None));
    round_trip("depth", &seven, || commands::depth(&seven, vec![Rat::from(2), Rat::from(1)]));
    round_trip("rado-check", &seven, || commands::rado(&seven, 2));
    round_trip("rado-check", &cross, || commands::rado(&cross, 3));
    for name in ["line-5", "cross", "curated-cascade-2", "curated-cascade-7"] {
        let g = Ctx::new(commands::gallery_input(name).unwrap()).unwrap();
        round_trip("gallery", &g, || commands::gallery_checks(name, &g.set));
    }
    // a violated hypothesis still yields a well-formed report
    round_trip("cascade-construct", &line, || commands::cascade_construct(&line.set, 1, false));
}

#[test]
fn tampering_is_detected() {
    let seven = ctx(&PointSet::from_i64(2, &[&[0, 0], &[6, 0], &[0, 6], &[1, 1], &[5, 0], &[2, 3], &[3, 1]]).unwrap());
    let report =
        commands::run("tverberg", vec![], Some(seven.doc.clone()), || commands::tverberg(&seven, 3, None)).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    v["result"]["search"]["found"]["point"][1] = serde_json::Value::String("9/2".into());
    let tampered = Report::from_json(&v.to_string()).unwrap();
    assert!(tampered.verify().is_err());

    let mut v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    v["input"]["points"][0][0] = serde_json::Value::String("-1".into());
    assert!(Report::from_json(&v.to_string()).unwrap().verify().is_err());
}
