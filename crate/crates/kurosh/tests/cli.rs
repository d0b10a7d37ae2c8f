//! End-to-end tests of the `kurosh` binary: report contents on stdout,
//! file output, and the exit-code contract (0 success, 1 input error,
//! 2 violated assertion, 3 guard/indeterminate).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples/data")
        .join(name)
}

fn kurosh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kurosh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process not killed by signal")
}

#[test]
fn rank_reports_euler_data() {
    let input = data("z2-z3.json");
    let out = kurosh(&["rank", "--input", input.to_str().unwrap(), "--subgroup", "K"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["schema"], "kurosh-report/1");
    assert_eq!(v["command"], "rank");
    assert_eq!(v["ambient"], "Z2*Z3");
    assert_eq!(v["subgroup"]["complete"], true);
    assert_eq!(v["subgroup"]["index"], 6);
    assert_eq!(v["subgroup"]["rank"], 2);
    assert_eq!(v["subgroup"]["reduced_rank"], 1);
    assert_eq!(v["subgroup"]["euler_characteristic"], -1);
    assert_eq!(v["subgroup"]["basis"].as_array().unwrap().len(), 2);
    assert_eq!(v["factor_free"], true);
    // elapsed_ms only appears under --timings
    assert!(v.get("elapsed_ms").is_none());
}

#[test]
fn member_yes_and_no_both_exit_zero() {
    let input = data("z2-z3.json");
    let input = input.to_str().unwrap();
    let yes = kurosh(&["member", "--input", input, "--subgroup", "H1", "--word", "ab"]);
    assert_eq!(code(&yes), 0);
    let v = stdout_json(&yes);
    assert_eq!(v["member"], true);
    assert_eq!(v["word"], "ab");

    let no = kurosh(&["member", "--input", input, "--subgroup", "H1", "--word", "a"]);
    assert_eq!(code(&no), 0, "non-membership is an answer, not an error");
    let v = stdout_json(&no);
    assert_eq!(v["member"], false);
}

#[test]
fn member_normalizes_before_testing() {
    let input = data("z2-z3.json");
    let out = kurosh(&[
        "member",
        "--input",
        input.to_str().unwrap(),
        "--subgroup",
        "H1",
        "--word",
        "ab^3b",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["normalized"], "ab");
    assert_eq!(v["member"], true);
}

#[test]
fn export_dot_draws_the_whole_graph() {
    let input = data("z2-z3.json");
    let out = kurosh(&[
        "export-dot",
        "--input",
        input.to_str().unwrap(),
        "--subgroup",
        "H1",
    ]);
    assert_eq!(code(&out), 0);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("graph"));
    // cyclic word ab: two primary vertices, one secondary per factor, four edges
    assert_eq!(dot.matches("shape=box").count(), 2);
    assert_eq!(dot.matches("shape=circle").count(), 2);
    assert_eq!(dot.matches(" -- ").count(), 4);
    assert!(dot.contains("peripheries=2"), "base vertex is highlighted");
}

#[test]
fn intersect_reports_all_three_graphs() {
    let input = data("z2-z3.json");
    let out = kurosh(&[
        "intersect",
        "--input",
        input.to_str().unwrap(),
        "--left",
        "Cube",
        "--right",
        "K",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["command"], "intersect");
    assert_eq!(v["left"]["name"], "Cube");
    assert_eq!(v["right"]["name"], "K");
    assert!(v["intersection"]["rank"].as_u64().is_some());
}

#[test]
fn verify_bound_holds_on_examples() {
    let input = data("z2-z3.json");
    let out = kurosh(&[
        "verify-bound",
        "--input",
        input.to_str().unwrap(),
        "--left",
        "Cube",
        "--right",
        "K",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["holds"], true);
    assert_eq!(v["q_star"], "3");
    assert_eq!(v["coefficient"], "6");
}

#[test]
fn verify_theorem2_on_lifted_pair() {
    let input = data("lifted-pairs.json");
    let out = kurosh(&[
        "verify-theorem2",
        "--input",
        input.to_str().unwrap(),
        "--amalgam",
        "Z4*Z2cube",
        "--left",
        "L1",
        "--right",
        "L2",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["command"], "verify-theorem2");
    assert_eq!(v["edge_order"], 2);
    assert_eq!(v["holds"], true);
    assert!(v["tau_image_size"].as_u64().unwrap() <= 2);
}

#[test]
fn paper_case_with_amalgam_section() {
    let amalgam = data("z4-z2cube.json");
    let out = kurosh(&[
        "paper-case",
        "--case",
        "3",
        "--n",
        "2",
        "--amalgam",
        amalgam.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["case"], 3);
    assert_eq!(v["holds"], true);
    assert_eq!(v["equality"], true);
    assert_eq!(v["h1_normal"], true);
    assert_eq!(v["covers"], true);
    assert_eq!(v["index_product_exact"], true);
    let am = &v["amalgam"];
    assert_eq!(am["lhs"], 120);
    assert_eq!(am["rhs"], "120");
    assert_eq!(am["equality"], true);
    assert_eq!(am["tau_surjective"], true);
    assert_eq!(am["indices_multiply"], true);
}

#[test]
fn paper_case_all_covers_four_cases() {
    let out = kurosh(&["paper-case", "--all", "--n", "1"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["command"], "paper-case");
    let cases = v["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 4);
    for case in cases {
        assert_eq!(case["holds"], true);
        assert_eq!(case["equality"], true);
    }
}

#[test]
fn output_flag_writes_file_and_timings_add_elapsed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let input = data("z2-z3.json");
    let out = kurosh(&[
        "--output",
        path.to_str().unwrap(),
        "--timings",
        "rank",
        "--input",
        input.to_str().unwrap(),
        "--subgroup",
        "H1",
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty(), "report goes to the file, not stdout");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.ends_with('\n'));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert!(v["elapsed_ms"].as_u64().is_some(), "--timings records a duration");
}

#[test]
fn guard_exceeded_exits_three() {
    let input = data("z2-z3.json");
    let out = kurosh(&[
        "--max-states",
        "3",
        "intersect",
        "--input",
        input.to_str().unwrap(),
        "--left",
        "Cube",
        "--right",
        "K",
    ]);
    assert_eq!(code(&out), 3);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("guard"), "stderr: {err}");
}

#[test]
fn unreachable_search_exits_three() {
    let out = kurosh(&["paper-case", "--case", "1", "--n", "1", "--degree-bound", "3"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn input_errors_exit_one() {
    // missing file
    let out = kurosh(&["rank", "--input", "/nonexistent/nothing.json", "--subgroup", "H1"]);
    assert_eq!(code(&out), 1);

    // unknown subgroup name
    let input = data("z2-z3.json");
    let out = kurosh(&["rank", "--input", input.to_str().unwrap(), "--subgroup", "Nope"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Nope"));

    // malformed word
    let out = kurosh(&[
        "member",
        "--input",
        input.to_str().unwrap(),
        "--subgroup",
        "H1",
        "--word",
        "ab^",
    ]);
    assert_eq!(code(&out), 1);

    // letter outside the alphabet
    let out = kurosh(&[
        "member",
        "--input",
        input.to_str().unwrap(),
        "--subgroup",
        "H1",
        "--word",
        "xyz",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn bad_json_schema_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{ "groups": { "X": { "cyclicc": 2 } } }"#).unwrap();
    let out = kurosh(&["rank", "--input", path.to_str().unwrap(), "--subgroup", "H1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn usage_errors_exit_one_help_exits_zero() {
    // paper-case requires exactly one of --case / --all
    let out = kurosh(&["paper-case"]);
    assert_eq!(code(&out), 1);

    let out = kurosh(&["paper-case", "--case", "2", "--all"]);
    assert_eq!(code(&out), 1);

    // a case number outside 1..=4
    let out = kurosh(&["paper-case", "--case", "9"]);
    assert_eq!(code(&out), 1);

    let out = kurosh(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("rank"));
}
