use std::io::Write;

use extensive_core::closure::ClosureFamily;
use extensive_core::context::Context;
use extensive_core::runner::{run, Outcome, RunConfig};
use extensive_core::theorems::{replay_sum_of_closed_embeddings, run_checker, Status, THEOREMS};
use extensive_core::Error;

fn config(theorems: &[&str], bound: usize) -> RunConfig {
    RunConfig {
        theorems: theorems.iter().map(|t| t.to_string()).collect(),
        bound,
        ..RunConfig::default()
    }
}

#[test]
fn usage_errors_are_reported_before_running() {
    let bad = |c: RunConfig| run(&c).unwrap_err();
    assert!(matches!(bad(RunConfig { context: "grp".into(), ..config(&["A"], 1) }), Error::UnknownContext(_)));
    assert!(matches!(bad(config(&["A"], 6)), Error::BoundOutOfRange(6)));
    assert!(matches!(bad(config(&["A"], 0)), Error::BoundOutOfRange(0)));
    assert!(matches!(bad(config(&["Z"], 1)), Error::UnknownTheorem(_)));
    assert!(matches!(bad(RunConfig { e_bound: Some(9), ..config(&["E"], 1) }), Error::BoundOutOfRange(9)));
    let fam = RunConfig { families: vec!["sober".into()], ..config(&["B"], 1) };
    assert!(matches!(bad(fam), Error::UnknownFamily(_)));
}

#[test]
fn all_expands_in_fixed_order_and_gated_entries_do_not_fail() {
    let r = run(&config(&["H", "all", "A"], 1)).unwrap();
    let ids: Vec<&str> = r.config.theorems.iter().map(String::as_str).collect();
    assert_eq!(ids, ["validate", "adjunctions", "biproduct", "A", "B", "C", "D", "E", "F", "G", "H"]);
    let gated = r.entry("D", Some(ClosureFamily::Indiscrete)).unwrap();
    assert!(matches!(&gated.outcome, Outcome::Verdict(v) if v.status == Status::HypothesisFailed));
    assert!(r.passed);
}

#[test]
fn family_independent_checkers_run_once() {
    let r = run(&config(&["A", "E", "B"], 1)).unwrap();
    assert_eq!(r.entries.iter().filter(|e| e.id == "A").count(), 1);
    assert_eq!(r.entries.iter().filter(|e| e.id == "B").count(), ClosureFamily::ALL.len());
}

#[test]
fn timings_only_with_flag() {
    let plain = run(&config(&["A"], 1)).unwrap().to_json();
    assert!(!plain.contains("millis"));
    let timed = run(&RunConfig { timings: true, ..config(&["A"], 1) }).unwrap().to_json();
    assert!(timed.contains("millis"));
}

#[test]
fn extra_objects_are_enumerated() {
    let mut file = tempfile_path("chain.json");
    let path = file.0.clone();
    writeln!(
        file.1,
        r#"{{"objects":[{{"name":"Chain","carrier":["p","q","r","s"],"order":[["p","q"],["q","r"],["p","r"],["r","s"],["q","s"],["p","s"]]}}]}}"#
    )
    .unwrap();
    let r = run(&RunConfig { objects: Some(path.clone()), ..config(&["validate"], 1) }).unwrap();
    assert!(r.passed);
    let ctx = Context::builtin("finpre").unwrap().with_objects(extensive_core::description::load_objects(&path).unwrap()).unwrap();
    assert!(ctx.objects(1).iter().any(|x| x.name() == "Chain"));
    let missing = RunConfig { objects: Some(path.with_extension("nope")), ..config(&["A"], 1) };
    assert!(matches!(run(&missing).unwrap_err(), Error::Description(_)));
}

fn tempfile_path(name: &str) -> (std::path::PathBuf, std::fs::File) {
    let dir = std::env::temp_dir().join(format!("extensive-core-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    let f = std::fs::File::create(&path).unwrap();
    (path, f)
}

#[test]
fn closed_embedding_witnesses_replay() {
    let ctx = Context::builtin("finset").unwrap();
    let v = run_checker("B", &ctx, ClosureFamily::Indiscrete, 2).unwrap();
    let w = v.sides[0].witness.clone().unwrap();
    assert!(!replay_sum_of_closed_embeddings(&ctx, ClosureFamily::Indiscrete, &w).unwrap());
    // the same pair is fine once closures are componentwise
    assert!(replay_sum_of_closed_embeddings(&ctx, ClosureFamily::Alexandrov, &w).unwrap());
    let json = serde_json::to_string(&w).unwrap();
    let back = serde_json::from_str(&json).unwrap();
    assert!(!replay_sum_of_closed_embeddings(&ctx, ClosureFamily::Indiscrete, &back).unwrap());
}

#[test]
fn verdicts_are_stable_as_the_bound_grows() {
    for name in ["finset", "finpre"] {
        let ctx = Context::builtin(name).unwrap();
        for id in THEOREMS {
            for fam in ClosureFamily::ALL {
                let small = run_checker(id, &ctx, fam, 1).unwrap();
                let large = run_checker(id, &ctx, fam, 2).unwrap();
                assert_eq!(small.status, large.status, "{name} {id} {fam}");
                for (a, b) in small.sides.iter().zip(&large.sides) {
                    // a side refuted at a small bound stays refuted, and
                    // larger bounds examine at least as many cases
                    assert!(a.passed || !b.passed, "{name} {id} {fam} {}", a.id);
                    assert!(a.cases <= b.cases, "{name} {id} {fam} {}", a.id);
                }
            }
        }
    }
}

#[test]
fn ordinal_sums_are_not_extensive() {
    let ctx = Context::ordinal_mutant();
    let r = extensive_core::context::validate_extensive(&ctx, 2);
    assert!(!r.passed());
}
