use std::process::{Command, Output};

fn hurwitz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitz")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn help_exits_zero() {
    assert_eq!(hurwitz(&["--help"]).status.code(), Some(0));
    assert_eq!(hurwitz(&["slice", "--help"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["orbit", "--n", "2", "--a", "1", "1"][..],
        &["orbit", "--n", "3", "--a", "1", "1"],
        &["orbit", "--n", "3", "--a", "1,x", "1", "1"],
        &["check", "--n", "3", "--a", "3", "3", "3", "--K", "2"],
        &["slice", "--res", "10"],
        &["identity", "--n", "3", "--a", "3", "3", "3", "--variant", "edge", "--tail", "1.1"],
        &["frobnicate"],
    ] {
        let o = hurwitz(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn orbit_records() {
    let o = hurwitz(&["orbit", "--n", "3", "--a", "3,0", "3,0", "3,0", "--depth", "2"]);
    assert!(o.status.success());
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[0]["x"], serde_json::json!([[3.0, 0.0], [3.0, 0.0], [3.0, 0.0]]));
    assert_eq!(lines[0]["v"], serde_json::json!([]));
}

#[test]
fn negative_coordinates_with_equals() {
    let o = hurwitz(&["orbit", "--n", "3", "--a=-1,0.5", "--a", "2", "--a", "2", "--depth", "0"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("[-1.0,0.5]"));
}

#[test]
fn markoff_listing() {
    let o = hurwitz(&["markoff", "--n", "3", "--bound", "100"]);
    assert_eq!(stdout(&o), "(3, 3, 3)\n(3, 3, 6)\n(3, 6, 15)\n(3, 15, 39)\n(6, 15, 87)\n");
    assert_eq!(stdout(&hurwitz(&["markoff", "--n", "3", "--bound", "2"])), "");
}

#[test]
fn check_exit_codes() {
    let inside = hurwitz(&["check", "--n", "3", "--a", "3", "3", "3"]);
    assert_eq!(inside.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&inside.stdout).unwrap();
    assert_eq!(v["status"], "InDomain");

    assert_eq!(hurwitz(&["check", "--n", "3", "--a", "1", "1", "1"]).status.code(), Some(1));
    let budget = hurwitz(&["check", "--n", "3", "--a", "1,0.3", "1,0.3", "1,0.3", "--budget", "20"]);
    assert_eq!(budget.status.code(), Some(3));
}

#[test]
fn identity_table() {
    let o = hurwitz(&["identity", "--n", "3", "--a", "3", "3", "3", "--depth", "5"]);
    assert!(o.status.success());
    let rows: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows[5]["residual"].as_f64().unwrap() < 1e-4);
}

#[test]
fn fib_table() {
    let o = hurwitz(&["fib", "--n", "3", "--max-m", "5", "--depth", "5"]);
    let s = stdout(&o);
    assert!(s.contains("5\t12\n"));
    assert!(s.contains("0 collisions"));
}

#[test]
fn slice_writes_ppm_and_summary() {
    let dir = std::env::temp_dir().join(format!("hurwitz-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ppm = dir.join("s.ppm");
    let json = dir.join("s.json");
    let o = hurwitz(&[
        "slice",
        "--res",
        "8x6",
        "--budget",
        "50",
        "--out",
        ppm.to_str().unwrap(),
        "--summary",
        json.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let bytes = std::fs::read(&ppm).unwrap();
    assert!(bytes.starts_with(b"P6\n8 6\n255\n"));
    assert_eq!(bytes.len(), b"P6\n8 6\n255\n".len() + 8 * 6 * 3);
    let summary: serde_json::Value = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    let c = &summary["counts"];
    let total: u64 = ["in_domain", "not_in_domain", "undetermined"].iter().map(|k| c[k].as_u64().unwrap()).sum();
    assert_eq!(total, 48);
    std::fs::remove_dir_all(&dir).unwrap();
}
