//! End-to-end checks of the binary: exit codes, JSON output, and
//! determinism of seeded commands.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hodge-eds"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn domain_info_reports_dimension() {
    let out = run(&[
        "domain-info",
        "--weight",
        "3",
        "--hodge",
        "1,1,1,1",
        "--json",
        "-",
    ]);
    assert!(out.status.success(), "exit: {:?}", out.status);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dim_D"], 4);
    assert_eq!(v["structure_ok"], true);
}

#[test]
fn json_output_is_deterministic() {
    let args = [
        "derived-flag",
        "--weight",
        "4",
        "--hodge",
        "2,2,2,2,2",
        "--json",
        "-",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "same run, different bytes");
}

#[test]
fn human_rendering_matches_json_fields() {
    let out = run(&["domain-info", "--weight", "2", "--hodge", "2,1,2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("dim_D = 3"), "rendered output:\n{text}");
    assert!(text.contains("structure_ok = true"));
}

#[test]
fn missing_subject_is_a_config_error() {
    let out = run(&["domain-info"]);
    assert_eq!(out.status.code(), Some(2), "stderr: {:?}", out.stderr);
}

#[test]
fn unknown_middle_form_is_a_config_error() {
    let out = run(&[
        "domain-info",
        "--weight",
        "2",
        "--hodge",
        "1,1,1",
        "--middle",
        "hyperbolic",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_is_merged_under_flags() {
    let dir = std::env::temp_dir().join("hodge-eds-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("domain.toml");
    std::fs::write(&path, "weight = 3\nhodge = [1, 1, 1, 1]\n").unwrap();
    let out = run(&[
        "domain-info",
        "--config",
        path.to_str().unwrap(),
        "--hodge",
        "1,2,2,1",
        "--json",
        "-",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["weight"], 3, "weight comes from the file");
    assert_eq!(v["hodge"], serde_json::json!([1, 2, 2, 1]), "flag wins");
}

#[test]
fn integral_cartan_reports_ordinary_normal_form() {
    let out = run(&[
        "integral",
        "cartan",
        "--weight",
        "2",
        "--hodge",
        "3,2,3",
        "--trials",
        "60",
        "--json",
        "-",
    ]);
    assert!(out.status.success(), "stderr: {:?}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["polar_ranks"], serde_json::json!([0, 3]));
    assert_eq!(v["tangent_codim"], 3);
    assert_eq!(v["ordinary"], true);
}

#[test]
fn nl_bound_holds_on_seeded_fixture() {
    let out = run(&["nl-bound", "--num-vars", "2", "--seed", "5", "--json", "-"]);
    assert!(out.status.success(), "stderr: {:?}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["holds"], true);
    assert_eq!(v["rank_q_zeta"], v["codim"]);
}
