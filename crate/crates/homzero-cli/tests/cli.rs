//! End-to-end checks of the binary: exit codes, report contents, JSON shape.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn homzero(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homzero"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn validate_accepts_good_table() {
    let out = homzero(&[
        "validate",
        data("example1.semigroup.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    assert!(stdout_of(&out).contains("6 elements"));
}

#[test]
fn validate_rejects_broken_table_with_witness() {
    let out = homzero(&["validate", data("broken.semigroup.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("not associative"));
}

#[test]
fn cat0_reports_witness_on_monogenic() {
    let out = homzero(&["cat0", data("monogenic3.semigroup.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("categorical-at-zero: no"));
    assert!(text.contains("(a, a, a)"));
}

#[test]
fn h0_example1_dimension_two_vanishes() {
    let out = homzero(&[
        "h0",
        data("example1.semigroup.json").to_str().unwrap(),
        data("trivial-z.module.json").to_str().unwrap(),
        "--max-dim",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("H_2 = 0"), "{text}");
    assert!(text.contains("H_0 = Z"), "{text}");
}

#[test]
fn h0_with_explicit_element_actions() {
    // the generator a acts as zero, so H_2 is the full coefficient group
    let out = homzero(&[
        "h0",
        data("example2.semigroup.json").to_str().unwrap(),
        data("example2-elements.module.json").to_str().unwrap(),
        "--max-dim",
        "2",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(parsed["groups"]["2"], "Z");
    assert_eq!(parsed["verdicts"]["categorical-at-zero"], "yes");
}

#[test]
fn pipeline_example1_via_ideal() {
    let out = homzero(&[
        "pipeline",
        data("example1.pres").to_str().unwrap(),
        data("trivial-z.module.json").to_str().unwrap(),
        "--max-dim",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("H_2 = 0"), "{text}");
    assert!(text.contains("categorical-at-zero: verified"), "{text}");
    assert!(text.contains("warning:"), "{text}");
}

#[test]
fn pipeline_example2_zero_action_json() {
    let out = homzero(&[
        "pipeline",
        data("example2.pres").to_str().unwrap(),
        data("a-kills-z.module.json").to_str().unwrap(),
        "--max-dim",
        "2",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(parsed["groups"]["2"], "Z");
    assert_eq!(parsed["verdicts"]["route"], "ideal");
}

#[test]
fn pipeline_adyan_graph_route_high_dimensions_vanish() {
    let out = homzero(&[
        "pipeline",
        data("adyan.pres").to_str().unwrap(),
        data("trivial-z.module.json").to_str().unwrap(),
        "--max-dim",
        "5",
        "--via",
        "graph",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(parsed["groups"]["4"], "0");
    assert_eq!(parsed["groups"]["5"], "0");
    assert_eq!(parsed["verdicts"]["longest-path"], "2");
    assert_eq!(parsed["verdicts"]["entrance-exit"], "verified");
}

#[test]
fn pipeline_adyan_ideal_route_fails_categoricity() {
    // the non-divisor quotient of this presentation is not categorical at
    // zero, so the ideal route must refuse rather than report groups
    let out = homzero(&[
        "pipeline",
        data("adyan.pres").to_str().unwrap(),
        data("trivial-z.module.json").to_str().unwrap(),
        "--via",
        "ideal",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("not categorical"));
}

#[test]
fn pipeline_undecided_exits_two() {
    // the relation class of an idempotent generator grows without bound, so
    // the closure truncates and the verdict is undecided
    let out = homzero(&[
        "pipeline",
        data("idempotent.pres").to_str().unwrap(),
        data("trivial-z.module.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr_of(&out));
    assert!(stderr_of(&out).contains("undecided"));
}

#[test]
fn env_budget_override_forces_undecided() {
    let out = Command::new(env!("CARGO_BIN_EXE_homzero"))
        .args([
            "pipeline",
            data("example1.pres").to_str().unwrap(),
            data("trivial-z.module.json").to_str().unwrap(),
        ])
        .env("HOMZERO_BUDGET", "1")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2), "{}", stderr_of(&out));
}

#[test]
fn bar_homology_of_c2() {
    let out = homzero(&[
        "bar",
        data("c2.semigroup.json").to_str().unwrap(),
        data("trivial-z.module.json").to_str().unwrap(),
        "--max-dim",
        "3",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(parsed["groups"]["0"], "Z");
    assert_eq!(parsed["groups"]["1"], "Z/2");
    assert_eq!(parsed["groups"]["2"], "0");
    assert_eq!(parsed["groups"]["3"], "Z/2");
}

#[test]
fn reflector_equivalence_verdicts() {
    let table = data("example1.semigroup.json");
    let path = table.to_str().unwrap();
    // identical sequences
    let out = homzero(&["reflector", path, "eq", "b.a", "b.a"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("equal"));
    // <a><b> merges to <x>, so the 1-sequences x and x are equal; meanwhile
    // b.a and b.c are distinct classes
    let out = homzero(&["reflector", path, "eq", "b.a", "b.c"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("distinct"));
}

#[test]
fn reflector_one_step_equivalence() {
    // ab.c and a.bc differ by one elementary move
    let table = data("chain.semigroup.json");
    let path = table.to_str().unwrap();
    let out = homzero(&["reflector", path, "eq", "ab.c", "a.bc"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    assert!(stdout_of(&out).contains("equal"));
}

#[test]
fn reflector_unknown_exits_two() {
    // certifying ab.c distinct from b needs its closure, which budget 0
    // cannot enumerate
    let table = data("chain.semigroup.json");
    let path = table.to_str().unwrap();
    let out = homzero(&["reflector", path, "eq", "ab.c", "b", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_of(&out).contains("unknown"));
}

#[test]
fn usage_errors_exit_three() {
    let out = homzero(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn json_report_round_trips() {
    let out = homzero(&[
        "cat0",
        data("example1.semigroup.json").to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    let reprinted = serde_json::to_string(&parsed).unwrap();
    let reparsed: serde_json::Value = serde_json::from_str(&reprinted).unwrap();
    assert_eq!(parsed, reparsed);
}
