use serde_json::Value;
use std::path::Path;
use std::process::Command;
use tempfile::TempDir;

const K33_MINUS_E: &str = "left 3\nright 3\ne s0 r0\ne s0 r1\ne s0 r2\ne s1 r0\ne s1 r1\ne s1 r2\ne s2 r0\ne s2 r1\n";
const C4: &str = "left 2\nright 2\ne s0 r0\ne s0 r1\ne s1 r0\ne s1 r1\n";
const K33: &str = "left 3\nright 3\ne s0 r0\ne s0 r1\ne s0 r2\ne s1 r0\ne s1 r1\ne s1 r2\ne s2 r0\ne s2 r1\ne s2 r2\n";
const I2: &str = "students 2\nresidencies 2\na: x y\nb: y x\nx: b a\ny: a b\n";

/// Runs `smp --json args...` and returns the exit code and the report.
fn smp(dir: &Path, args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_smp"))
        .current_dir(dir)
        .arg("--json")
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 1, "exactly one report line: {stdout}");
    let rep: Value = serde_json::from_str(lines[0]).unwrap();
    let code = out.status.code().unwrap();
    assert_eq!(rep["exit_code"], code);
    (code, rep)
}

fn setup(files: &[(&str, &str)]) -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in files {
        std::fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

#[test]
fn recognize_exit_codes() {
    let d = setup(&[("k33-e.bg", K33_MINUS_E), ("c4.bg", C4), ("malformed.bg", "left 2\nright x\n")]);
    let (code, rep) = smp(d.path(), &["recognize", "k33-e.bg", "--algorithm", "path"]);
    assert_eq!(code, 1);
    assert_eq!(rep["outputs"]["realizable"], false);
    let (code, _) = smp(d.path(), &["recognize", "k33-e.bg", "--algorithm", "dp"]);
    assert_eq!(code, 1);
    let (code, rep) = smp(d.path(), &["recognize", "malformed.bg"]);
    assert_eq!(code, 2);
    assert_eq!(rep["guard"], "error");
    assert!(rep["outputs"]["error"].as_str().unwrap().starts_with("line 2"));
    let (code, _) = smp(d.path(), &["recognize", "missing.bg"]);
    assert_eq!(code, 2);
}

#[test]
fn witness_validates() {
    let d = setup(&[("c4.bg", C4)]);
    let (code, _) = smp(d.path(), &["recognize", "c4.bg", "--algorithm", "oracle", "--witness", "w.rsys"]);
    assert_eq!(code, 0);
    let (code, rep) = smp(d.path(), &["validate", "c4.bg", "w.rsys"]);
    assert_eq!(code, 0);
    assert_eq!(rep["outputs"]["valid"], true);
    std::fs::write(d.path().join("bad.rsys"), "TOP\ns0 r0\ns1 r1\nBOTTOM\ns0 r0\ns1 r1\n").unwrap();
    let (code, rep) = smp(d.path(), &["validate", "c4.bg", "bad.rsys"]);
    assert_eq!(code, 1);
    assert!(!rep["outputs"]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn state_guard_reports_resource_limit() {
    let d = setup(&[("k33.bg", K33)]);
    let (code, rep) = smp(d.path(), &["recognize", "k33.bg", "--algorithm", "path", "--max-states", "1"]);
    assert_eq!(code, 2);
    assert_eq!(rep["guard"], "resource-limit");
}

#[test]
fn generate_grid_and_lattice() {
    let d = setup(&[("chain3.poset", "elem a\nelem b\nelem c\ncover a b\ncover b c\n")]);
    let (code, _) = smp(d.path(), &["generate", "grid", "4", "5"]);
    assert_eq!(code, 0);
    let (code, _) = smp(d.path(), &["validate", "grid_4x5.bg", "grid_4x5.rsys"]);
    assert_eq!(code, 0);
    let (code, rep) = smp(d.path(), &["generate", "grid", "3", "3"]);
    assert_eq!(code, 0);
    assert_eq!(rep["outputs"]["realizable"], false);
    let (code, _) = smp(d.path(), &["generate", "lattice", "chain3.poset"]);
    assert_eq!(code, 0);
    let (code, _) = smp(d.path(), &["validate", "chain3.bg", "chain3.rsys"]);
    assert_eq!(code, 0);
    let (code, _) = smp(d.path(), &["generate", "product", "grid_4x5.bg", "grid_4x5.rsys", "chain3.bg", "chain3.rsys"]);
    assert_eq!(code, 0);
    let (code, _) = smp(d.path(), &["validate", "grid_4x5_x_chain3.bg", "grid_4x5_x_chain3.rsys"]);
    assert_eq!(code, 0);
    let (code, _) = smp(d.path(), &["generate", "grid", "x", "5"]);
    assert_eq!(code, 2);
    let (code, _) = smp(d.path(), &["generate", "nope"]);
    assert_eq!(code, 2);
}

#[test]
fn generate_regular_and_nae() {
    let d = setup(&[("k33.bg", K33), ("c4.bg", C4)]);
    let (code, _) = smp(d.path(), &["generate", "regular", "k33.bg"]);
    assert_eq!(code, 0);
    let (code, rep) = smp(d.path(), &["analyze", "k33.smi"]);
    assert_eq!(code, 0);
    assert_eq!(rep["outputs"]["stable_pairs"], 9);
    let (code, _) = smp(d.path(), &["generate", "regularize", "c4.bg"]);
    assert_eq!(code, 0);
    let (_, a) = smp(d.path(), &["--seed", "7", "generate", "nae3sat", "4", "5", "--out", "a"]);
    let (_, b) = smp(d.path(), &["--seed", "7", "generate", "nae3sat", "4", "5", "--out", "b"]);
    assert_eq!(a["outputs"]["edges"], b["outputs"]["edges"]);
    let fa = std::fs::read(d.path().join("a/nae_4_5_s7.bg")).unwrap();
    let fb = std::fs::read(d.path().join("b/nae_4_5_s7.bg")).unwrap();
    assert_eq!(fa, fb);
    let (code, _) = smp(d.path(), &["validate", "a/nae_4_5_s7.bg", "a/nae_4_5_s7.rsys"]);
    assert_eq!(code, 0);
    let (code, _) = smp(d.path(), &["generate", "nae3sat", "a/nae_4_5_s7.nae", "--out", "c"]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read(d.path().join("c/nae_4_5_s7.bg")).unwrap(), fa);
}

#[test]
fn generate_all_small() {
    let d = setup(&[]);
    let (code, rep) = smp(d.path(), &["generate", "all-small", "4", "--out", "s"]);
    assert_eq!(code, 0);
    assert_eq!(rep["outputs"]["graphs"], 8);
    assert_eq!(std::fs::read_dir(d.path().join("s")).unwrap().count(), 8);
}

#[test]
fn analyze_reports() {
    let d = setup(&[
        ("i2.smi", I2),
        ("k33.bg", K33),
        ("unbalanced.bg", "left 2\nright 1\ne s0 r0\ne s1 r0\n"),
    ]);
    let (code, rep) = smp(d.path(), &["analyze", "i2.smi"]);
    assert_eq!(code, 0);
    assert_eq!(rep["outputs"]["stable_matchings"], 2);
    assert_eq!(rep["outputs"]["rotations"], 1);
    let (_, rep) = smp(d.path(), &["analyze", "k33.bg"]);
    assert_eq!(rep["outputs"]["regular"], true);
    assert_eq!(rep["outputs"]["realizable"], true);
    let (_, rep) = smp(d.path(), &["analyze", "unbalanced.bg"]);
    let failed = rep["outputs"]["failed_conditions"].as_array().unwrap();
    assert!(failed.iter().any(|f| f == "balanced"));
    assert_eq!(rep["outputs"]["realizable"], false);
}

#[test]
fn gs_and_lattice() {
    let d = setup(&[("i2.smi", I2)]);
    let (_, rep) = smp(d.path(), &["gs", "i2.smi"]);
    assert_eq!(rep["outputs"]["matching"], serde_json::json!([["a", "x"], ["b", "y"]]));
    let (_, rep) = smp(d.path(), &["gs", "i2.smi", "--proposers", "residencies"]);
    assert_eq!(rep["outputs"]["matching"], serde_json::json!([["a", "y"], ["b", "x"]]));
    let (_, rep) = smp(d.path(), &["lattice", "i2.smi"]);
    assert_eq!(rep["outputs"]["stable_matchings"].as_array().unwrap().len(), 2);
}

#[test]
fn bench_tables() {
    let d = setup(&[("k33-e.bg", K33_MINUS_E), ("c4.bg", C4)]);
    let (code, rep) = smp(d.path(), &["bench"]);
    assert_eq!(code, 0);
    assert_eq!(rep["outputs"]["rows"], serde_json::json!([]));
    let (_, rep) = smp(d.path(), &["bench", "c4.bg", "k33-e.bg", "--algorithms", "path,dp,oracle"]);
    let rows = rep["outputs"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let decisions: Vec<&str> = rows.iter().map(|r| r["decision"].as_str().unwrap()).collect();
    assert_eq!(decisions[..3], ["realizable"; 3]);
    assert_eq!(decisions[3..], ["unrealizable"; 3]);
}

#[test]
fn plain_text_mode_puts_report_on_stderr() {
    let d = setup(&[("c4.bg", C4)]);
    let out = Command::new(env!("CARGO_BIN_EXE_smp"))
        .current_dir(d.path())
        .args(["recognize", "c4.bg"])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("realizable"));
    let err = String::from_utf8(out.stderr).unwrap();
    let rep: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(rep["command"], "recognize");
    assert_eq!(rep["input_digest"].as_str().unwrap().len(), 64);
}
