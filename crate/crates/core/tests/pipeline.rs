use std::collections::BTreeMap;

use rigidum_core::pipeline::{
    canonical_json, load_module, run, verify_bundle, Command, Exit, ExperimentConfig, ModulePresentation, RunOptions,
};

fn config(name: &str) -> ExperimentConfig {
    let path = format!("{}/../../configs/{name}.json", env!("CARGO_MANIFEST_DIR"));
    ExperimentConfig::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn files_with(out: &BTreeMap<String, String>, prefix: &str) -> Vec<String> {
    out.keys().filter(|k| k.starts_with(prefix)).cloned().collect()
}

#[test]
fn integer_report_writes_the_full_bundle() {
    let out = run(&config("integers"), Command::Report, RunOptions::default());
    assert_eq!(out.exit, Exit::Ok, "{:?}", out.messages);
    assert_eq!(files_with(&out.files, "module-"), ["module-c0.json", "module-c0_c1.json", "module-c1.json"]);
    assert_eq!(files_with(&out.files, "cert-").len(), 3);
    assert_eq!(files_with(&out.files, "noniso-").len(), 3);
    assert!(out.files.contains_key("spec.json"));
    let summary = &out.files["summary.txt"];
    assert!(summary.contains("3 non-isomorphic indecomposable, rank 4"));
    assert!(summary.contains("achieved: 3 non-isomorphic indecomposable essential submodules of E^(R), R = 2^kappa1 = 4"));
    assert!(summary.contains("2^kappa2 - 1 = 3"));
    assert!(summary.contains("Theta pairwise incomparable: yes"));
}

#[test]
fn commands_write_cumulative_outputs() {
    let cfg = config("integers");
    let v = run(&cfg, Command::Validate, RunOptions::default());
    assert_eq!(v.exit, Exit::Ok);
    assert_eq!(v.files.keys().collect::<Vec<_>>(), ["spec.json"]);
    let b = run(&cfg, Command::Build, RunOptions::default());
    assert_eq!(b.files.len(), 4);
    let c = run(&cfg, Command::Certify, RunOptions::default());
    assert_eq!(c.files.len(), 10);
    assert!(!c.files.contains_key("summary.txt"));
}

#[test]
fn bundle_is_byte_identical_and_replays() {
    let cfg = config("integers");
    let a = run(&cfg, Command::Certify, RunOptions::default());
    let b = run(&cfg, Command::Certify, RunOptions::default());
    assert_eq!(a.files, b.files);
    let v = verify_bundle(&a.files);
    assert_eq!(v.exit, Exit::Ok, "{:?}", v.messages);
    assert_eq!(v.messages.len(), 9);
    assert!(v.messages.iter().all(|m| m.ends_with("[ok]")));
}

#[test]
fn tampered_bundle_fails_verification() {
    let cfg = config("integers");
    let mut files = run(&cfg, Command::Certify, RunOptions::default()).files;
    let cert = files.get_mut("cert-c0.json").unwrap();
    *cert = cert.replacen("\"passed\": true", "\"passed\": false", 1);
    let v = verify_bundle(&files);
    assert_eq!(v.exit, Exit::Refuted);
    assert!(v.messages.iter().any(|m| m.ends_with("[MISMATCH]")));
}

#[test]
fn module_presentations_round_trip() {
    let out = run(&config("weyl"), Command::Build, RunOptions::default());
    for (name, text) in out.files.iter().filter(|(k, _)| k.starts_with("module-")) {
        let p: ModulePresentation = serde_json::from_str(text).unwrap();
        let (spec, m) = load_module(&p).unwrap();
        assert_eq!(canonical_json(&rigidum_core::pipeline::present_module(&spec, &m)), *text, "{name}");
    }
}

#[test]
fn noncommutative_instances_pass() {
    let out = run(&config("weyl"), Command::Report, RunOptions::default());
    assert_eq!(out.exit, Exit::Ok);
    let summary = &out.files["summary.txt"];
    assert!(summary.contains("y*x = x*y + 1"));
    assert!(summary.contains("3 non-isomorphic indecomposable, rank 4"));
    let out = run(&config("frobenius-f9"), Command::Report, RunOptions::default());
    assert_eq!(out.exit, Exit::Ok);
    let summary = &out.files["summary.txt"];
    assert!(summary.contains("1 non-isomorphic indecomposable, rank 4"));
    assert!(summary.contains("y*g = 2*g*y"));
}

#[test]
fn sabotage_exit_statuses() {
    let out = run(&config("sabotage-associates"), Command::Report, RunOptions::default());
    assert_eq!(out.exit, Exit::Validation);
    assert!(out.messages.iter().any(|m| m.contains("non-associate") && m.contains("a0=2, a1=-2")));
    assert!(out.files.contains_key("spec.json"));
    let out = run(&config("sabotage-divisible-a"), Command::Report, RunOptions::default());
    assert_eq!(out.exit, Exit::Refuted);
    assert!(out.messages.iter().all(|m| m.contains("condition 3")));
    let out = run(&config("sabotage-duplicate-support"), Command::Report, RunOptions::default());
    assert_eq!(out.exit, Exit::Refuted);
    assert!(out.messages.iter().all(|m| m.contains("condition 2")));
    let out = run(&config("localized-unit"), Command::Validate, RunOptions::default());
    assert_eq!(out.exit, Exit::Validation);
    assert!(out.messages.iter().any(|m| m.contains("b0=5/7") && m.contains("unit")));
}

#[test]
fn config_errors_exit_with_status_two() {
    let mut cfg = config("integers");
    cfg.delta = vec!["2/3".into()];
    let out = run(&cfg, Command::Validate, RunOptions::default());
    assert_eq!(out.exit, Exit::Config);
    assert!(out.messages[0].contains("2/3"));
    assert!(ExperimentConfig::from_json("{\"ring\": {\"kind\": \"Integers\"}, \"gamma_pairs\": [], \"bogus\": 1}").is_err());
    let mut cfg = config("integers");
    cfg.subsets = rigidum_core::pipeline::SubsetSpec::Keyword("some".into());
    assert_eq!(run(&cfg, Command::Build, RunOptions::default()).exit, Exit::Config);
    let mut cfg = config("integers");
    cfg.subsets = rigidum_core::pipeline::SubsetSpec::Explicit(vec![vec!["17".into()]]);
    assert_eq!(run(&cfg, Command::Build, RunOptions::default()).exit, Exit::Config);
}

#[test]
fn oracle_check_on_small_bounds() {
    let opts = RunOptions { coeff: Some(6), ..RunOptions::default() };
    let mut cfg = config("integers");
    cfg.oracle_bounds.subset = Some(vec!["13".into()]);
    let out = run(&cfg, Command::OracleCheck, opts);
    assert_eq!(out.exit, Exit::Ok, "{:?}", out.messages);
    assert!(out.files.contains_key("oracle-c1.json"));
    let out = run(&cfg, Command::OracleCheck, RunOptions { coeff: Some(2), ..RunOptions::default() });
    assert_eq!(out.exit, Exit::Config);
}
