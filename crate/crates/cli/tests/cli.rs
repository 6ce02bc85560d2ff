use std::path::Path;
use std::process::Command;
use std::sync::Arc;

use moore_tower::format::{parse_input_str, ComplexJson, Input};
use moore_tower::report::{sequence_table, Format, Report};
use moore_tower::{execute, CommandName, CommandRequest};
use moore_tower_core::compare::ExactSequenceReport;
use moore_tower_core::{FgModule, Matrix, ModuleMap, RingSpec};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_moore-tower"));
    c.current_dir(env!("CARGO_MANIFEST_DIR"));
    c
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    assert!(!out.is_empty(), "no report for {:?}: {}", args, err);
    (code, serde_json::from_str(&out).expect("report is JSON"))
}

#[test]
fn kinv_on_periodic_is_essential() {
    let (code, r) = run_json(&["kinv", "tests/data/z4_periodic.json", "--degree", "0"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "non-nullhomotopic");
    assert_eq!(r["results"]["nullhomotopic"], false);
    assert_eq!(r["results"]["equivalent_to_split"], false);
}

#[test]
fn kinv_on_free_integer_complex_is_null() {
    for seed in ["1", "2", "3"] {
        let (code, r) = run_json(&["kinv", "--seed", seed, "--degree", "0"]);
        assert_eq!(code, 0);
        assert_eq!(r["verdict"], "nullhomotopic");
        assert_eq!(r["results"]["equivalent_to_split"], true);
    }
}

#[test]
fn lift_of_unrealizable_target_exits_two_with_certificate() {
    let (code, r) = run_json(&["lift", "tests/data/lift_periodic.json"]);
    assert_eq!(code, 2);
    assert_eq!(r["verdict"], "unrealizable");
    assert_eq!(r["results"]["exhausted"], true);
    let certs = r["results"]["certificates"].as_array().unwrap();
    assert!(!certs.is_empty());
    assert!(certs.iter().all(|c| c["reason"].is_string()));
}

#[test]
fn lift_of_moore_target_is_verified() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("moore.json");
    let (code, _, err) = run(&["lift", "tests/data/z4_periodic.json", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{}", err);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["verdict"], "realizable");
    let lifts = r["results"]["lifts"].as_array().unwrap();
    assert!(!lifts.is_empty());
    assert!(lifts.iter().all(|l| l["verified"] == true));
}

#[test]
fn oracle_agrees_with_lift_on_periodic() {
    let (code, r) = run_json(&["oracle", "tests/data/lift_periodic.json"]);
    assert_eq!(code, 2);
    assert!(r["results"]["witness"].is_null());
}

#[test]
fn spiral_on_random_seed_verifies() {
    for seed in ["1", "5", "9"] {
        let (code, r) = run_json(&["spiral", "--seed", seed]);
        assert_eq!(code, 0);
        assert_eq!(r["results"]["all_verified"], true);
        for t in r["tables"].as_array().unwrap() {
            for row in t["rows"].as_array().unwrap() {
                let exact = row.as_array().unwrap().last().unwrap();
                assert!(exact == "yes" || exact == "endpoint", "{}", row);
            }
        }
    }
}

#[test]
fn ext_classify_counts_two_for_z2_by_z2() {
    let (code, r) = run_json(&["ext-classify", "tests/data/pair_z2_z2.json"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["extension_count"], 2);
    assert_eq!(r["results"]["bijection"], true);
}

#[test]
fn commands_accept_seeded_inputs() {
    let all = [
        "snf", "module", "homology", "postnikov", "kinv", "dold-kan", "moore", "matching", "latching",
        "bockstein", "compare-les", "spiral", "ext-classify", "lift", "oracle",
    ];
    for c in all {
        let (code, out, err) = run(&[c, "--seed", "4", "--format", "text"]);
        assert!(code == 0 || code == 2, "{} failed: {}", c, err);
        assert!(out.starts_with(&format!("command: {}\n", c)));
    }
}

#[test]
fn dd_error_names_degrees() {
    let (code, out, err) = run(&["homology", "tests/data/bad_dd.json"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("d_1 ∘ d_2"), "{}", err);
}

#[test]
fn simplicial_error_names_level_and_indices() {
    let (code, _, err) = run(&["moore", "tests/data/bad_simplicial.json"]);
    assert_eq!(code, 1);
    assert!(err.contains("level 2") && err.contains("(i, j) = (0, 1)"), "{}", err);
}

#[test]
fn malformed_documents_report_locations() {
    let bad_entry = r#"{"ring":"Z","top_degree":1,"terms":[{"generators":1,"relations":[]},{"generators":1,"relations":[]}],
        "differentials":[{"rows":1,"cols":1,"entries":["x"]}]}"#;
    let e = format!("{:#}", parse_input_str(bad_entry).unwrap_err());
    assert!(e.contains("differentials[0]"), "{}", e);

    let bad_shape = r#"{"ring":"Z","top_degree":1,"terms":[{"generators":1,"relations":[]},{"generators":2,"relations":[]}],
        "differentials":[{"rows":1,"cols":1,"entries":["1"]}]}"#;
    let e = format!("{:#}", parse_input_str(bad_shape).unwrap_err());
    assert!(e.contains("differentials[0]"), "{}", e);

    let bad_ring = r#"{"ring":"Zmod:1","top_degree":0,"terms":[{"generators":1,"relations":[]}],"differentials":[]}"#;
    assert!(parse_input_str(bad_ring).is_err());

    let unknown = r#"{"rows":1,"cols":1,"entries":["1"],"extra":0}"#;
    assert!(parse_input_str(unknown).is_err());
}

#[test]
fn bad_flags_exit_one() {
    for args in [
        vec!["homology", "--seed", "1", "--range", "3..1"],
        vec!["snf", "--seed", "1", "--ring", "Q"],
        vec!["lift", "--seed", "1", "--bounds", "width=3"],
        vec!["compare-les", "tests/data/z_moore.json", "--ring", "Z"],
        vec!["homology"],
    ] {
        let (code, out, err) = run(&args);
        assert_eq!(code, 1, "{:?}", args);
        assert!(out.is_empty() && err.starts_with("error:"), "{:?}: {}", args, err);
    }
}

#[test]
fn thread_cap_is_honoured_and_validated() {
    let out = bin()
        .args(["homology", "--seed", "2"])
        .env("MOORE_TOWER_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin()
        .args(["homology", "--seed", "2"])
        .env("MOORE_TOWER_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_report_reloads_structurally_equal() {
    let req = CommandRequest {
        command: CommandName::CompareLes,
        input: Some(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/z_moore.json")),
        ring: Some(RingSpec::modulo(2)),
        degree: None,
        range: Some((0, 1)),
        bounds: None,
        seed: None,
    };
    let report = execute(&req).unwrap().report;
    let text = report.render(Format::Json);
    let back: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
    assert_eq!(back.render(Format::Json), text);
}

#[test]
fn complex_format_roundtrips() {
    let (_, r) = run_json(&["homology", "--seed", "12"]);
    let doc = serde_json::to_string(&r["results"]["complex"]).unwrap();
    let c = match parse_input_str(&doc).unwrap() {
        Input::Complex(c) => c,
        other => panic!("parsed as {}", other.kind()),
    };
    let again: ComplexJson = serde_json::from_str(&doc).unwrap();
    assert_eq!(ComplexJson::from_complex(&c), again);
}

#[test]
fn six_term_sequence_table_has_six_rows() {
    let z = RingSpec::Integers;
    let free = Arc::new(FgModule::free(z.clone(), 1));
    let c2 = Arc::new(FgModule::cyclic(z.clone(), 2));
    let c3 = Arc::new(FgModule::cyclic(z.clone(), 3));
    let m = |a: &Arc<FgModule>, b: &Arc<FgModule>, x: i64| ModuleMap::from_parts(a.clone(), b.clone(), Matrix::from_i64(1, 1, &[x]));
    // Z -2-> Z -> Z/2 -0-> Z -0-> Z -> Z/3
    let terms = vec![free.clone(), free.clone(), c2.clone(), free.clone(), free.clone(), c3.clone()];
    let maps = vec![m(&free, &free, 2), m(&free, &c2, 1), m(&c2, &free, 0), m(&free, &free, 0), m(&free, &c3, 1)];
    let labels = ["A", "B", "C", "D", "E", "F"].map(String::from).to_vec();
    let r = ExactSequenceReport::assemble("test", labels, terms, maps);
    let t = sequence_table("six terms", &r);
    assert_eq!(t.rows.len(), 6);
    assert_eq!(t.columns.last().unwrap(), "exact");
    let verdicts: Vec<&str> = t.rows.iter().map(|r| r.last().unwrap().as_str()).collect();
    // D has kernel Z and image 0; E has kernel 3Z and image 0.
    assert_eq!(verdicts, ["endpoint", "yes", "yes", "no", "no", "endpoint"]);
}
