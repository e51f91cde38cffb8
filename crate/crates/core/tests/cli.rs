use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_shadowlab"));
    c.env_remove("SHADOWLAB_BUDGET");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Runs a command that must succeed, validates its stdout against the
/// named schema and returns it.
fn json_ok(args: &[&str], schema: &str) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    let path = format!("{}/schemas/{schema}", env!("CARGO_MANIFEST_DIR"));
    let s: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&s).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?} vs {schema}: {errors:?}");
    v
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn classify_six_vertex_path() {
    let v = json_ok(&["classify", "--curve", &data("six_vertex_path.curve"), "--axis", "all"], "classify.schema.json");
    let kinds: Vec<_> = v["shadows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["report"]["classification"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(kinds, ["Cycle", "Cycle", "Cycle"]);
    let one = json_ok(&["classify", "--curve", &data("six_vertex_path.curve"), "--axis", "2"], "classify.schema.json");
    assert_eq!(one["shadows"].as_array().unwrap().len(), 1);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&["classify"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["classify", "--curve", &data("six_vertex_path.curve"), "--axis", "7"]), 2);
    assert_eq!(code(&["search", "path-shadow-cycles", "--samples", "10"]), 2);
    assert_eq!(code(&["search", "strand-laws", "--samples", "10"]), 2);
}

#[test]
fn validation_and_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.curve", "open\n0 0 0\n0 0 0\n");
    assert_eq!(code(&["classify", "--curve", &bad]), 3);
    assert_eq!(code(&["classify", "--curve", "/nonexistent/x.curve"]), 1);
    let six = data("six_vertex_path.curve");
    assert_eq!(code(&["render", "--curve", &six, "--axis", "1", "--out", "/nonexistent/dir/x.svg"]), 1);
}

#[test]
fn budget_refusal_exits_4() {
    let out = bin()
        .env("SHADOWLAB_BUDGET", "10")
        .args(["search", "min-vertex-paths", "--n", "5", "--grid", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn strands_and_lift() {
    let dir = tempfile::tempdir().unwrap();
    let zig = write(dir.path(), "zig.curve", "open\n0 0\n2 1\n0 2\n");
    let v = json_ok(&["strands", "--curve", &zig, "--axis", "1"], "strands.schema.json");
    assert_eq!(v.as_array().unwrap().len(), 2);

    let gamma = write(dir.path(), "g.curve", "open\n0 0 0\n2 1 0\n0 2 1\n");
    let v = json_ok(&["lift", "--curve", &gamma, "--shadow", "3", "--axis", "1"], "lift.schema.json");
    let first = &v[0]["lifted"]["endpoints"];
    assert_eq!(first, &serde_json::json!([["0", "0", "0"], ["2", "1", "0"]]));
    assert_eq!(code(&["lift", "--curve", &data("six_vertex_path.curve"), "--shadow", "3", "--axis", "1"]), 3);
}

#[test]
fn searches_emit_valid_reports() {
    let v = json_ok(
        &["search", "path-shadow-cycles", "--samples", "500", "--seed", "1"],
        "search-report.schema.json",
    );
    assert_eq!(v["counterexamples"], serde_json::json!([]));
    let v = json_ok(
        &["search", "convex-shadow-paths", "--samples", "300", "--seed", "7", "--max-len", "6"],
        "search-report.schema.json",
    );
    assert_eq!(v["counterexamples"], serde_json::json!([]));
    let v = json_ok(
        &["search", "min-vertex-paths", "--n", "4", "--grid", "2"],
        "search-report.schema.json",
    );
    assert_eq!(v["witnesses"], serde_json::json!([]));
    json_ok(
        &["search", "branch-census", "--grid", "1", "--max-len", "8"],
        "search-report.schema.json",
    );
    json_ok(
        &["search", "strand-laws", "--samples", "200", "--lifts", "10", "--max-len", "12", "--seed", "3"],
        "strand-suite.schema.json",
    );
}

#[test]
fn tree_search_writes_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let v = json_ok(
        &["search", "tree-shadow-cycle", "--grid", "2", "--max-len", "24", "--out-dir", &out],
        "tree-search.schema.json",
    );
    for s in v["shadows"].as_array().unwrap() {
        assert_eq!(s["classification"], "Tree");
    }
    let witness = dir.path().join("witness-0.curve");
    let w = json_ok(&["classify", "--curve", witness.to_str().unwrap()], "classify.schema.json");
    assert_eq!(w["closed"], true);
}

#[test]
fn seeded_output_independent_of_jobs() {
    let args = ["search", "path-shadow-cycles", "--samples", "300", "--seed", "9"];
    let a = bin().args(["--jobs", "1"]).args(args).output().unwrap();
    let b = bin().args(["--jobs", "3"]).args(args).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sphere_commands() {
    let dir = tempfile::tempdir().unwrap();
    let vox = dir.path().join("s.vox").display().to_string();
    let v = json_ok(&["sphere", "build", "--res", "8", "--out", &vox], "voxel-summary.schema.json");
    assert_eq!(v["dim"], 4);
    assert_eq!(v["components"], 1);
    let sh = dir.path().join("s4.vox").display().to_string();
    json_ok(&["sphere", "shadow", "--voxels", &vox, "--axis", "4", "--out", &sh], "voxel-summary.schema.json");
    let v = json_ok(&["sphere", "betti", "--voxels", &sh], "betti.schema.json");
    assert_eq!(v["betti"], serde_json::json!([1, 0, 0]));
    // The pole cell holds the tip of the cone over the base, so the bottom
    // slice is a few cells around the origin rather than a single one.
    let bottom = dir.path().join("b.vox").display().to_string();
    json_ok(
        &["sphere", "slice", "--voxels", &vox, "--axis", "4", "--level", "-8", "--out", &bottom],
        "voxel-summary.schema.json",
    );
    let text = std::fs::read_to_string(&bottom).unwrap();
    let cells: Vec<Vec<i64>> = text
        .lines()
        .skip(2)
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
        .collect();
    assert!(cells.contains(&vec![0, 0, 0]));
    assert!(cells.iter().flatten().all(|c| c.abs() <= 1));
    assert_eq!(code(&["sphere", "slice", "--voxels", &vox, "--axis", "4", "--level", "99"]), 3);
    let v = json_ok(&["sphere", "slice-check", "--res", "8"], "slice-scaling.schema.json");
    assert_eq!(v["ok"], true);
    let v = json_ok(
        &["sphere", "retract-check", "--axis", "2", "--samples", "100", "--seed", "4"],
        "retraction-report.schema.json",
    );
    assert_eq!(v["violations"], serde_json::json!([]));
    assert_eq!(code(&["sphere", "retract-check", "--axis", "2"]), 2);
    assert_eq!(code(&["sphere", "build", "--res", "4"]), 3);
}

#[test]
fn compat_commands() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().display().to_string();
    let v = json_ok(
        &["compat", "find-example", "--size", "3", "--seed", "1", "--out-dir", &w],
        "disconnection.schema.json",
    );
    assert!(v["witness"].is_array());
    let s: Vec<String> = (1..=3)
        .map(|k| dir.path().join(format!("s{k}.txt")).display().to_string())
        .collect();
    let shadows = ["--s1", &s[0], "--s2", &s[1], "--s3", &s[2]];
    let largest = json_ok(&[&["compat", "largest"][..], &shadows].concat(), "compat-result.schema.json");
    assert_eq!(largest["perShadowExact"], serde_json::json!([true, true, true]));
    let comps = json_ok(&[&["compat", "components"][..], &shadows].concat(), "components.schema.json");
    assert!(comps["componentCount"].as_u64().unwrap() >= 2);
    let cell = |k: usize| {
        comps["components"][k][0]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let (a, b) = (cell(0), cell(1));
    let r = json_ok(&[&["compat", "reach"][..], &shadows, &["--from", &a, "--to", &b]].concat(), "reach.schema.json");
    assert_eq!(r["reachable"], false);
    let r = json_ok(&[&["compat", "reach"][..], &shadows, &["--from", &a, "--to", &a]].concat(), "reach.schema.json");
    assert_eq!(r["reachable"], true);
    let v = json_ok(&["compat", "union-closure", "--pairs", "50", "--seed", "2"], "union-closure.schema.json");
    assert_eq!(v["unionViolations"], 0);
    let v = json_ok(&["compat", "find-example", "--size", "2"], "disconnection.schema.json");
    assert_eq!(v["witness"], Value::Null);
}

#[test]
fn render_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    for p in [&a, &b] {
        json_ok(
            &["render", "--curve", &data("tree_shadow_cycle.curve"), "--axis", "2", "--labels", "--out", p.to_str().unwrap()],
            "render.schema.json",
        );
    }
    let svg = std::fs::read(&a).unwrap();
    assert_eq!(svg, std::fs::read(&b).unwrap());
    assert!(String::from_utf8(svg).unwrap().matches("class=\"branch\"").count() >= 2);
}
