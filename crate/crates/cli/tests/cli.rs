use std::path::Path;
use std::process::{Command, Output};

use hyperturan::io;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperturan"))
        .args(args)
        .env_remove("HYPERTURAN_NODE_LIMIT")
        .env_remove("HYPERTURAN_TIME_LIMIT_MS")
        .env_remove("HYPERTURAN_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn fano(dir: &Path) -> std::path::PathBuf {
    let file = dir.join("fano.txt");
    let out = run(&[
        "build",
        "design",
        "--n",
        "7",
        "--r",
        "3",
        "--out",
        path_str(&file),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    file
}

#[test]
fn fano_is_linear_and_p3_free() {
    let dir = tempfile::tempdir().unwrap();
    let file = fano(dir.path());
    assert_eq!(code(&run(&["check", "linear", "--in", path_str(&file)])), 0);
    assert_eq!(code(&run(&["check", "design", "--in", path_str(&file)])), 0);
    assert_eq!(
        code(&run(&[
            "check",
            "free",
            "--pattern",
            "P3@r3",
            "--in",
            path_str(&file)
        ])),
        0
    );
}

#[test]
fn found_pattern_exits_two_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let file = fano(dir.path());
    let out = run(&["check", "free", "--pattern", "S3", "--in", path_str(&file)]);
    assert_eq!(code(&out), 2);
    let witness = io::from_json(stdout(&out).trim()).unwrap();
    assert_eq!(witness.edge_count(), 3);
    assert!(witness.is_linear());
}

#[test]
fn non_linear_host_fails_check() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("k4.txt");
    std::fs::write(&file, "n 4 r 3\n0 1 2\n0 1 3\n").unwrap();
    assert_eq!(code(&run(&["check", "linear", "--in", path_str(&file)])), 2);
    assert_eq!(code(&run(&["check", "design", "--in", path_str(&file)])), 2);
}

#[test]
fn turan_prints_value_and_stores_it() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--output-dir",
        path_str(dir.path()),
        "turan",
        "--n",
        "6",
        "--r",
        "3",
        "--pattern",
        "P2",
        "--linear",
    ];
    let out = run(&args);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "2");
    assert!(dir.path().join("results.jsonl").exists());
    let again = run(&args);
    assert_eq!(stdout(&again).trim(), "2");
    let report = run(&[
        "--output-dir",
        path_str(dir.path()),
        "report",
        "--format",
        "structured",
    ]);
    assert_eq!(code(&report), 0);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&report)).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 1);
    assert_eq!(rows[0]["value"], 2);
    assert_eq!(rows[0]["consistent"], true);
}

#[test]
fn interrupted_search_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "--output-dir",
        path_str(dir.path()),
        "turan",
        "--n",
        "9",
        "--r",
        "3",
        "--pattern",
        "P3",
        "--node-limit",
        "20",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["turan", "--n", "6"])), 1);
    assert_eq!(
        code(&run(&[
            "bound",
            "--theorem",
            "nope",
            "--r",
            "3",
            "--n",
            "9"
        ])),
        1
    );
    assert_eq!(
        code(&run(&["check", "linear", "--in", "/nonexistent/file"])),
        1
    );
    assert_eq!(
        code(&run(&[
            "turan",
            "--n",
            "6",
            "--r",
            "3",
            "--pattern",
            "P2@r4",
            "--no-store"
        ])),
        1
    );
}

#[test]
fn build_round_trips_through_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, extra) in [
        ("path", ["--r", "3", "--ell", "4"]),
        ("star", ["--r", "4", "--ell", "3"]),
        ("cycle", ["--r", "3", "--ell", "5"]),
    ] {
        for format in ["text", "structured"] {
            let file = dir.path().join(format!("{kind}.{format}"));
            let mut args = vec!["--format", format, "build", kind, "--out", path_str(&file)];
            args.extend(extra);
            assert_eq!(code(&run(&args)), 0);
            let text = std::fs::read_to_string(&file).unwrap();
            let g = io::parse_any(&text).unwrap();
            assert!(g.graph().is_linear());
            assert_eq!(code(&run(&["check", "linear", "--in", path_str(&file)])), 0);
        }
    }
}

#[test]
fn product_of_files_is_linear() {
    let dir = tempfile::tempdir().unwrap();
    let left = fano(dir.path());
    let right = dir.path().join("lattice.json");
    let out = run(&[
        "--format",
        "structured",
        "build",
        "lattice",
        "--side",
        "3",
        "--dim",
        "2",
        "--out",
        path_str(&right),
    ]);
    assert_eq!(code(&out), 0);
    let prod = dir.path().join("prod.json");
    let out = run(&[
        "--format",
        "structured",
        "build",
        "product",
        "--left",
        path_str(&left),
        "--right",
        path_str(&right),
        "--out",
        path_str(&prod),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let g = io::parse_any(&std::fs::read_to_string(&prod).unwrap()).unwrap();
    assert_eq!(g.graph().vertex_count(), 63);
    assert_eq!(g.graph().edge_count(), 7 * 9 + 6 * 7);
}

#[test]
fn design_lattice_construction_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.json");
    let report = dir.path().join("report.json");
    let out = run(&[
        "--format",
        "structured",
        "build",
        "thm47",
        "--r",
        "3",
        "--ell",
        "4",
        "--k",
        "3",
        "--out",
        path_str(&file),
        "--report",
        path_str(&report),
    ]);
    assert_eq!(code(&out), 0);
    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep["achieved"], 141);
    assert_eq!(rep["target"], "451/3");
    let out = run(&[
        "verify",
        "construction",
        "--in",
        path_str(&file),
        "--pattern",
        "P4+3*S4",
        "--linear",
        "--uniform",
        "3",
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&[
        "verify",
        "construction",
        "--in",
        path_str(&file),
        "--pattern",
        "P3",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn inadmissible_design_exits_two() {
    assert_eq!(code(&run(&["build", "design", "--n", "8", "--r", "3"])), 2);
}

#[test]
fn section2_report_is_structured() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("h.txt");
    std::fs::write(&file, "n 9 r 3\n0 1 2\n2 3 4\n4 5 6\n0 7 8\n").unwrap();
    let out = run(&["verify", "section2", "--in", path_str(&file), "--ell", "5"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["embeddings"].as_u64().unwrap() > 0);
    assert_eq!(v["failed"], 0);
}

#[test]
fn bound_outputs_exact_strings() {
    let out = run(&[
        "--format",
        "structured",
        "bound",
        "--theorem",
        "linear-path",
        "--r",
        "3",
        "--ell",
        "4",
        "--n",
        "10",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["value"], "60");
    let out = run(&[
        "bound",
        "--theorem",
        "path-star-forest",
        "--r",
        "3",
        "--ell",
        "4",
        "--stars",
        "4",
        "--n",
        "100",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn suite_passes() {
    let out = run(&["verify", "suite"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn config_file_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "unknown = 1\n").unwrap();
    assert_eq!(
        code(&run(&["--config", path_str(&bad), "verify", "suite"])),
        1
    );
    let good = dir.path().join("good.toml");
    std::fs::write(&good, "format = \"structured\"\n[budget]\nthreads = 2\n").unwrap();
    let out = run(&[
        "--config",
        path_str(&good),
        "bound",
        "--theorem",
        "linear-p2",
        "--r",
        "3",
        "--n",
        "10",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).trim_start().starts_with('{'));
}
