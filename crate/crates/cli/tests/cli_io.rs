//! CLI-level behavior: config file parsing with flag overrides, exit-code
//! classification, and the artifact formats written by each command.

use std::fs;

use tfweyl_cli::config::{Command, RunConfig};
use tfweyl_cli::{resolve_config, run, CliError, Overrides};
use tfweyl_core::fieldio;
use tfweyl_core::weights::WeightKind;

fn no_overrides() -> Overrides {
    Overrides {
        n: None,
        l: None,
        stride: None,
        weight_kind: None,
        a: None,
        c: None,
        lambda: None,
        mu_max: None,
        mu_step: None,
        out: None,
        seed: None,
        case: None,
    }
}

#[test]
fn config_file_parses_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    fs::write(
        &path,
        r#"{
            "n": 64,
            "l": 6.0,
            "weight": {"kind": "power", "a": 0.5},
            "lambda": [0.5, 1.0],
            "seed": 42,
            "case": "chirp"
        }"#,
    )
    .unwrap();

    let cfg = resolve_config(Command::Diagnose, Some(&path), no_overrides()).unwrap();
    assert_eq!(cfg.n, 64);
    assert_eq!(cfg.weight.kind, WeightKind::Power);
    assert_eq!(cfg.lambda_list, vec![0.5, 1.0]);
    assert_eq!(cfg.seed, 42);
    assert_eq!(cfg.case.as_deref(), Some("chirp"));

    let mut ov = no_overrides();
    ov.seed = Some(7);
    ov.weight_kind = Some("log1p".into());
    let cfg = resolve_config(Command::Diagnose, Some(&path), ov).unwrap();
    assert_eq!(cfg.seed, 7);
    assert_eq!(cfg.weight.kind, WeightKind::Log1p);
    assert_eq!(cfg.n, 64);
}

#[test]
fn bad_configs_classify_as_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{ not json").unwrap();
    let err = resolve_config(Command::Identities, Some(&path), no_overrides()).unwrap_err();
    assert_eq!(err.exit_code(), 2);

    let mut ov = no_overrides();
    ov.weight_kind = Some("power".into());
    ov.a = Some(2.0); // out of range for the power family
    let err = resolve_config(Command::Identities, None, ov).unwrap_err();
    assert_eq!(err.exit_code(), 2);

    let mut cfg = RunConfig::defaults(Command::Identities);
    cfg.n = 100; // not a power of two
    match run(&cfg) {
        Err(CliError::Config(_)) => {}
        other => panic!("expected config error, got {other:?}"),
    }

    let mut cfg = RunConfig::defaults(Command::Demo);
    cfg.case = Some("unknown-case".into());
    cfg.out = dir.path().join("demo");
    match run(&cfg) {
        Err(e @ CliError::Config(_)) => assert_eq!(e.exit_code(), 2),
        other => panic!("expected config error, got {other:?}"),
    }
}

#[test]
fn operator_command_writes_loadable_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::defaults(Command::Operator);
    cfg.n = 64;
    cfg.l = 8.0;
    cfg.case = Some("identity".into());
    cfg.out = dir.path().to_path_buf();
    run(&cfg).unwrap();

    let bytes = fs::read(dir.path().join("operator.fld")).unwrap();
    let op = fieldio::read_operator(&mut bytes.as_slice()).unwrap();
    assert_eq!(op.n(), 64);

    let csv = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("index,re,im,modulus"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "0");
    let modulus: f64 = first[3].parse().unwrap();
    assert!((modulus - 1.0).abs() < 1e-8, "identity spectrum leads with 1");

    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("operator.json")).unwrap())
            .unwrap();
    assert_eq!(meta["case"], "identity");
    assert!(meta["inputs"][0]["sha256"].as_str().unwrap().len() == 64);
    assert_eq!(meta["config"]["n"], 64);
}

#[test]
fn diagnose_command_emits_report_and_curve() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::defaults(Command::Diagnose);
    cfg.n = 64;
    cfg.l = 6.0;
    cfg.case = Some("wigner-gaussian".into());
    cfg.out = dir.path().to_path_buf();
    run(&cfg).unwrap();

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("decay_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["report"]["verdict"], "CompactLike");
    assert_eq!(report["config"]["case"], "wigner-gaussian");
    assert!(report["report"]["heuristics"]["ring_tolerance"].is_number());

    let csv = fs::read_to_string(dir.path().join("mu_star.csv")).unwrap();
    assert!(csv.starts_with("lambda,mu_star\n"));
    assert!(csv.lines().count() >= 5);

    // symbol input is loadable and carries a sidecar
    let bytes = fs::read(dir.path().join("symbol.fld")).unwrap();
    let symbol = fieldio::read_sampled(&mut bytes.as_slice()).unwrap();
    assert_eq!(symbol.grid.dims(), 2);
    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("symbol.json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["fixture"], "wigner-gaussian");
}

#[test]
fn weights_command_reports_conditions() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::defaults(Command::Weights);
    cfg.weight = tfweyl_core::weights::Weight::power(0.5).unwrap();
    cfg.out = dir.path().to_path_buf();
    run(&cfg).unwrap();

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("weights.json")).unwrap())
            .unwrap();
    assert_eq!(report["conditions"]["alpha_ok"], true);
    assert_eq!(report["conditions"]["alpha_prime_ok"], true);
    assert_eq!(report["conditions"]["gamma_ok"], true);
    assert_eq!(report["conditions"]["delta_ok"], true);
    assert_eq!(report["pass"], true);
    assert!(report["conjugate"]["values"].as_array().unwrap().len() == 16);
}
