use std::path::PathBuf;

use proptest::prelude::*;
use serde_json::Value;
use starcone_cli::workspace::{FunctionalEntry, KernelEntry};
use starcone_cli::{execute, parse_workspace, CliError, WorkspaceFile};
use starcone_core::TolerancePolicy;
use starcone_testkit as tk;

const FIXTURES: &[&str] = &["z2.json", "z3.json", "s3.json", "m2.json", "m2_states.json", "homs.json"];

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn run(file: &str, rest: &[&str]) -> (i32, Value, String) {
    let path = fixture(file);
    let mut argv = vec!["starcone".to_string(), "-w".into(), path.display().to_string()];
    argv.extend(rest.iter().map(|s| s.to_string()));
    let out = execute(argv);
    let json = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, json, out.stderr)
}

fn write_temp(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

#[test]
fn z2_fixture_shape() {
    let ws = parse_workspace(&fixture("z2.json"), &TolerancePolicy::default()).unwrap();
    assert_eq!(ws.file.algebras.len(), 1);
    assert_eq!(ws.file.functionals.len(), 3);
    let ts: Vec<f64> = ws.file.functionals.values().map(|f| f.values[1].re).collect();
    assert_eq!(ts, vec![0.0, 1.0, -1.0]);
}

#[test]
fn every_fixture_loads_and_round_trips() {
    for name in FIXTURES {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let file = WorkspaceFile::from_json(&text).unwrap();
        let again = WorkspaceFile::from_json(&file.to_json()).unwrap();
        assert_eq!(file, again, "{name}");
        parse_workspace(&fixture(name), &TolerancePolicy::default()).unwrap();
    }
}

#[test]
fn corrupted_unit_law_is_a_validation_error() {
    let text = r#"{
      "algebras": {
        "c": {
          "dim": 1,
          "structure_constants": [[[[2.0, 0.0]]]],
          "involution": [[[1.0, 0.0]]],
          "unit": [[1.0, 0.0]]
        }
      }
    }"#;
    let f = write_temp(text);
    match parse_workspace(f.path(), &TolerancePolicy::default()) {
        Err(CliError::Validation { check, magnitude, .. }) => {
            assert_eq!(check, "unit");
            assert_eq!(magnitude, 1.0);
        }
        other => panic!("expected a validation error, got {other:?}"),
    }
}

#[test]
fn empty_file_is_a_parse_error() {
    let f = write_temp("");
    assert!(matches!(
        parse_workspace(f.path(), &TolerancePolicy::default()),
        Err(CliError::Parse { .. })
    ));
}

#[test]
fn parse_errors_carry_line_and_field() {
    let text = "{\n  \"functionals\": {\n    \"rho\": {\"algebra\": \"z2\", \"values\": [[1.0, 0.0], \"oops\"]}\n  }\n}";
    match WorkspaceFile::from_json(text) {
        Err(CliError::Parse { line, field, .. }) => {
            assert_eq!(line, 3);
            assert!(field.starts_with("functionals.rho.values"), "{field}");
        }
        other => panic!("{other:?}"),
    }
    let unknown = "{\"algebras\": {}, \"extras\": 1}";
    assert!(matches!(WorkspaceFile::from_json(unknown), Err(CliError::Parse { .. })));
}

#[test]
fn dangling_reference_is_rejected() {
    let mut file = WorkspaceFile::default();
    file.functionals.insert(
        "rho".into(),
        FunctionalEntry {
            algebra: "missing".into(),
            values: vec![],
        },
    );
    let f = write_temp(&file.to_json());
    assert!(matches!(
        parse_workspace(f.path(), &TolerancePolicy::default()),
        Err(CliError::UnknownEntity { kind: "algebra", .. })
    ));
}

#[test]
fn indefinite_kernel_is_a_validation_error() {
    let mut file = WorkspaceFile::default();
    file.kernels.insert(
        "bad".into(),
        KernelEntry {
            algebra: None,
            matrix: starcone_core::ComplexMatrix::from_real(&[&[1.0, 2.0], &[2.0, 1.0]]),
        },
    );
    let f = write_temp(&file.to_json());
    match parse_workspace(f.path(), &TolerancePolicy::default()) {
        Err(CliError::Validation { check, magnitude, .. }) => {
            assert_eq!(check, "psd");
            assert!((magnitude - 1.0).abs() < 1e-12);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn gns_example() {
    let (code, report, _) = run("z2.json", &["gns", "z2", "rho_t0"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["rep_dim"], 2);
    assert!(report["result"]["reproduction_residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(report["tolerances"]["rel_rank_tol"], 1e-9);
    assert_eq!(report["seed"], 0);
}

#[test]
fn decompose_example() {
    let (code, report, _) = run("m2.json", &["decompose", "m2", "trace", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["components"].as_array().unwrap().len(), 2);
    assert_eq!(report["result"]["multiplicity_classes"], serde_json::json!([[0, 1]]));
    assert_eq!(report["seed"], 7);
}

#[test]
fn cone_leq_example() {
    let (code, report, _) = run("z2.json", &["cone-leq", "k1", "k1"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["passed"], true);
}

#[test]
fn functional_names_stand_in_for_their_gram_kernels() {
    let (code, report, _) = run("z2.json", &["exclude", "rho_t1", "rho_tm1"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["mutually_excluding"], true);
}

#[test]
fn chains_through_the_cli() {
    let (code, report, _) = run("z2.json", &["chain", "increasing", "k_zero", "k0"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["rank"], 2);
    let (code, report, _) = run("z2.json", &["chain", "increasing", "k0", "k_zero", "--ratio", "2"]);
    assert_eq!(code, 1);
    assert_eq!(report["error"]["name"], "NotMajorized");
}

#[test]
fn exit_codes() {
    let (code, report, stderr) = run("z2.json", &["cone-diff", "k1", "k0"]);
    assert_eq!(code, 1);
    assert_eq!(report["error"]["name"], "NotDominated");
    assert!(stderr.contains("NotDominated"));

    let (code, _, stderr) = run("z2.json", &["frobnicate"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("UnknownVerb"));

    let (code, _, stderr) = run("z2.json", &["gns", "z2"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("usage"));

    let (code, _, _) = run("z2.json", &["gns", "z2", "nobody"]);
    assert_eq!(code, 2);

    let (code, _, _) = run("does-not-exist.json", &["validate"]);
    assert_eq!(code, 2);

    let out = execute(["starcone", "gns"]);
    assert_eq!(out.code, 2);
}

#[test]
fn text_output() {
    let out = execute([
        "starcone",
        "-w",
        fixture("z2.json").to_str().unwrap(),
        "--output",
        "text",
        "gns",
        "z2",
        "rho_t1",
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.lines().any(|l| l == "result.rep_dim = 1"), "{}", out.stdout);
}

#[test]
fn tolerance_flags_are_echoed() {
    let (code, report, _) = run("z2.json", &["--tol-match", "1e-6", "roundtrip", "z2", "rho_t0"]);
    assert_eq!(code, 0);
    assert_eq!(report["tolerances"]["match_tol"], 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_workspaces_round_trip(seed in any::<u64>()) {
        let mut rng = tk::rng(seed);
        let mut file = WorkspaceFile::default();
        for a in 0..3 {
            let s = tk::random_algebra(&mut rng);
            let name = format!("a{a}");
            let rho = tk::random_positive_functional(&mut rng, &s);
            file.functionals.insert(format!("rho{a}"), FunctionalEntry { algebra: name.clone(), values: rho.values });
            let n = s.dim();
            file.kernels.insert(
                format!("k{a}"),
                KernelEntry { algebra: Some(name.clone()), matrix: tk::random_psd(&mut rng, n, n) },
            );
            file.algebras.insert(name, s.algebra);
        }
        let again = WorkspaceFile::from_json(&file.to_json()).unwrap();
        prop_assert_eq!(&file, &again);
        prop_assert!(starcone_cli::Workspace::from_file(again, &TolerancePolicy::default()).is_ok());
    }
}
