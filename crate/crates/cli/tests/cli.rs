use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_symplectic"))
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run_file(kind: &str, path: &Path, extra: &[&str]) -> Output {
    bin().arg(kind).arg(path).args(extra).output().expect("binary runs")
}

fn run_stdin(kind: &str, input: &str, extra: &[&str]) -> Output {
    let mut child = bin()
        .arg(kind)
        .args(extra)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().expect("binary finishes")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Lagrangians of `Z/2 + Z/2` with `e((a, b), (c, d)) = (ad - bc)/2`, by
/// listing every subgroup and keeping the isotropic ones of order 2.
fn brute_force_lagrangians_z2() -> BTreeSet<BTreeSet<(i64, i64)>> {
    let points: Vec<(i64, i64)> = (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).collect();
    let e = |u: (i64, i64), v: (i64, i64)| (u.0 * v.1 - u.1 * v.0).rem_euclid(2);
    let mut out = BTreeSet::new();
    for &g in &points {
        for &h in &points {
            let mut s = BTreeSet::new();
            for i in 0..2 {
                for j in 0..2 {
                    s.insert(((i * g.0 + j * h.0) % 2, (i * g.1 + j * h.1) % 2));
                }
            }
            let isotropic = s.iter().all(|&u| s.iter().all(|&v| e(u, v) == 0));
            if isotropic && s.len() * s.len() == 4 {
                out.insert(s);
            }
        }
    }
    out
}

#[test]
fn lagrangians_of_the_z2_standard_space_match_brute_force() {
    let out = run_file("lagrangians", &golden_dir().join("lagrangians_z2.json"), &[]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let oracle = brute_force_lagrangians_z2();
    assert_eq!(v["result"]["count"], oracle.len());
    let found: BTreeSet<BTreeSet<(i64, i64)>> = v["result"]["subgroups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| {
            let gens: Vec<(i64, i64)> = s["generators"]
                .as_array()
                .unwrap()
                .iter()
                .map(|g| (g[0].as_i64().unwrap(), g[1].as_i64().unwrap()))
                .collect();
            let mut span = BTreeSet::from([(0, 0)]);
            loop {
                let next: BTreeSet<(i64, i64)> = span
                    .iter()
                    .flat_map(|&(a, b)| gens.iter().map(move |&(c, d)| ((a + c) % 2, (b + d) % 2)))
                    .chain(span.iter().copied())
                    .collect();
                if next == span {
                    break span;
                }
                span = next;
            }
        })
        .collect();
    assert_eq!(found, oracle);
}

#[test]
fn golden_outputs_are_reproduced() {
    let expected_dir = golden_dir().join("expected");
    let mut seen = 0;
    let mut entries: Vec<PathBuf> = std::fs::read_dir(golden_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    entries.sort();
    for path in entries {
        let job: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let kind = job["kind"].as_str().unwrap();
        let out = run_file(kind, &path, &["--quiet"]);
        let name = path.file_name().unwrap();
        let expected = std::fs::read_to_string(expected_dir.join(name)).unwrap();
        assert_eq!(String::from_utf8_lossy(&out.stdout), expected, "{}", path.display());
        let v = json(&out);
        let want = match (v["status"].as_str().unwrap(), v["error"]["kind"].as_str()) {
            ("ok", _) => 0,
            ("check_failed", _) | ("error", Some("invariant_violation")) => 1,
            _ => 2,
        };
        assert_eq!(code(&out), want, "{}", path.display());
        assert!(out.stderr.is_empty(), "--quiet still wrote to stderr");
        seen += 1;
    }
    assert!(seen >= 10);
}

#[test]
fn malformed_json_exits_with_two_and_a_position() {
    let out = run_stdin("lagrangians", "{\"version\": \"1\",\n \"kind\": ", &[]);
    assert_eq!(code(&out), 2);
    let msg = json(&out)["error"]["message"].as_str().unwrap().to_string();
    assert!(msg.contains("line 2"), "{msg}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("column"));
}

#[test]
fn wrong_kind_and_version_are_input_errors() {
    let out = run_stdin("model", r#"{"version": "1", "kind": "lagrangians", "space": {"standard": [2]}}"#, &[]);
    assert_eq!(code(&out), 2);
    let out = run_stdin("lagrangians", r#"{"version": "7", "kind": "lagrangians", "space": {"standard": [2]}}"#, &[]);
    assert_eq!(code(&out), 2);
}

#[test]
fn precondition_failures_exit_with_two() {
    let cases = [
        (
            "model",
            r#"{"version": "1", "kind": "model", "space": {"standard": [2]}, "pairs": {}, "pair": "missing"}"#,
        ),
        (
            "model",
            r#"{"version": "1", "kind": "model", "space": {"standard": [4]},
                "pairs": {"y": {"generators": [[1, 0], [0, 2]]}}, "pair": "y"}"#,
        ),
        (
            "intertwine",
            r#"{"version": "1", "kind": "intertwine", "space": {"standard": [4]},
                "pairs": {"t": {"generators": [[2, 0], [0, 2]]}, "d": {"generators": [[1, 1]]}},
                "source": "t", "target": "d"}"#,
        ),
        (
            "quasisplit",
            r#"{"version": "1", "kind": "quasisplit", "operation": "shear", "B": [2, 2], "f": [[0, 1], [0, 0]]}"#,
        ),
        (
            "quasisplit",
            r#"{"version": "1", "kind": "quasisplit", "operation": "commutator", "B": [3], "phi": [[1]]}"#,
        ),
        (
            "quasisplit",
            r#"{"version": "1", "kind": "quasisplit", "operation": "splitting", "B": [3], "f": [[0]], "n": 2, "m": 3, "k": -1}"#,
        ),
        (
            "descent",
            r#"{"version": "1", "kind": "descent", "zeta_order": 1,
                "covering": {"total": ["a", "b"], "base": ["p"], "map": {"a": "p", "b": "elsewhere"}},
                "values": [[[1]], [[1]]], "transitions": []}"#,
        ),
    ];
    for (kind, doc) in cases {
        let out = run_stdin(kind, doc, &[]);
        assert_eq!(code(&out), 2, "{doc}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out)["error"]["kind"], "invalid_input");
    }
}

#[test]
fn exceeding_the_bound_is_an_input_error() {
    let path = golden_dir().join("lagrangians_z4.json");
    let out = run_file("lagrangians", &path, &["--bound", "8"]);
    assert_eq!(code(&out), 2);
    assert!(json(&out)["error"]["message"].as_str().unwrap().contains("bound"));
    assert_eq!(code(&run_file("lagrangians", &path, &["--bound", "16"])), 0);
}

#[test]
fn missing_file_is_not_an_invariant_violation() {
    let out = run_file("lagrangians", Path::new("/nonexistent/job.json"), &[]);
    assert_eq!(code(&out), 2);
}

#[test]
fn cocycle_failure_names_the_triple() {
    let out = run_file("descent", &golden_dir().join("descent_cocycle_failure.json"), &[]);
    assert_eq!(code(&out), 2);
    let v = json(&out);
    let w: Vec<&str> = v["error"]["details"]["witness"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    assert_eq!(w.len(), 3);
    let msg = v["error"]["message"].as_str().unwrap();
    assert!(msg.contains(&format!("({}, {}, {})", w[0], w[1], w[2])));
}

#[test]
fn output_is_deterministic_and_independent_of_the_source() {
    let path = golden_dir().join("intertwine_auto_match.json");
    let a = run_file("intertwine", &path, &[]);
    let b = run_file("intertwine", &path, &["--seed", "99"]);
    let c = run_stdin("intertwine", &std::fs::read_to_string(&path).unwrap(), &[]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn output_flag_writes_the_file() {
    let dir = std::env::temp_dir().join(format!("symplectic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("out.json");
    let path = golden_dir().join("lagrangians_z2.json");
    let out = run_file("lagrangians", &path, &["--output", target.to_str().unwrap(), "--quiet"]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&target).unwrap();
    assert_eq!(written, run_file("lagrangians", &path, &[]).stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn summary_lists_each_identity() {
    let out = run_file("quasisplit", &golden_dir().join("quasisplit_normal_form.json"), &[]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.lines().filter(|l| l.trim_start().starts_with("PASS")).count(), 5);
}

#[test]
fn selftest_passes_and_reports_counts() {
    let a = bin().arg("selftest").output().unwrap();
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    let v = json(&a);
    assert_eq!(v["result"]["passed"], 12);
    assert_eq!(v["result"]["total"], 12);
    let stderr = String::from_utf8_lossy(&a.stderr);
    assert!(stderr.contains("2984 pairs"), "{stderr}");
    let b = bin().args(["selftest", "--quiet"]).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}
