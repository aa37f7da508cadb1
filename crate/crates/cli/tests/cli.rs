use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join(sub)
}

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mldkit"));
    cmd.current_dir(dir("inputs"))
        .args(args)
        .env_remove("MLDKIT_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

/// Compares stdout with `golden/<name>`; `MLDKIT_BLESS=1` rewrites it.
fn golden(name: &str, args: &[&str], code: i32) {
    let out = run(args, &[]);
    assert_eq!(
        out.status.code(),
        Some(code),
        "{args:?}: stderr {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path = dir("golden").join(name);
    if std::env::var_os("MLDKIT_BLESS").is_some() {
        fs::write(&path, &out.stdout).unwrap();
    }
    let want = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {name}"));
    assert_eq!(String::from_utf8_lossy(&out.stdout), want, "{args:?}");
}

fn stderr_of(args: &[&str], code: i32) -> String {
    let out = run(args, &[]);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    assert!(out.stdout.is_empty());
    String::from_utf8(out.stderr).unwrap()
}

#[test]
fn toric_commands() {
    golden(
        "toric_mld_quotient211.json",
        &["toric-mld", "quotient211.json"],
        0,
    );
    golden("toric_mld_nonlc.json", &["toric-mld", "nonlc.json"], 0);
    golden(
        "toric_lct_plane.json",
        &["toric-lct", "plane.json", "--a", "1"],
        0,
    );
    golden(
        "toric_lct_plane_a0.txt",
        &["toric-lct", "plane.json", "--a", "0", "--output", "human"],
        0,
    );
}

#[test]
fn germ_commands() {
    golden(
        "germ_discrepancy_ca7.json",
        &["germ-discrepancy", "ca7.json", "--weight", "5,16,3,7"],
        0,
    );
    golden(
        "germ_weights_half111.json",
        &["germ-weights", "half111.json", "--budget", "5"],
        0,
    );
}

#[test]
fn newton_commands() {
    golden(
        "newton_reduce.json",
        &["newton", "reduce", "staircase.json"],
        0,
    );
    golden("newton_chain.json", &["newton", "chain", "chain.json"], 0);
}

#[test]
fn reid_commands() {
    golden("reid_c.json", &["reid", "c", "5", "2", "-3"], 0);
    golden(
        "reid_family2.txt",
        &["reid", "family", "2", "--output", "human"],
        0,
    );
    golden(
        "reid_delta_check.json",
        &["reid", "delta-check", "basket2.json", "--r", "2"],
        0,
    );
    golden("reid_index.json", &["reid", "index", "basket2.json"], 0);
}

#[test]
fn ct_scan_json_and_csv() {
    golden(
        "ct_scan_k1_cap1.json",
        &["ct-scan", "--kind", "smooth", "--k", "1", "--cap", "1"],
        0,
    );
    let tmp = tempfile::tempdir().unwrap();
    let csv = tmp.path().join("scan.csv");
    let out = run(
        &[
            "ct-scan",
            "--kind",
            "cA",
            "--k",
            "1",
            "--cap",
            "2",
            "--emit-csv",
            csv.to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("value_num,value_den,r1,r2,dm"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first, ["4", "7", "2", "2", "7"]);
    // 1, 2/3, 3/4, 3/5, 4/5 and 4/7.
    assert_eq!(text.lines().count(), 1 + 6);
}

#[test]
fn verify_table() {
    golden("verify.txt", &["verify"], 0);
    golden(
        "verify_reid.json",
        &["verify", "--suite", "reid", "--output", "json"],
        0,
    );
    assert!(stderr_of(&["verify", "--suite", "nope"], 2).contains("unknown suite"));
}

#[test]
fn errors_and_exit_codes() {
    let e = stderr_of(&["toric-mld", "bad_rational.json"], 2);
    assert!(
        e.contains("coeffs[0]") && e.contains("zero denominator"),
        "{e}"
    );
    let e = stderr_of(&["toric-mld", "unknown_key.json"], 2);
    assert!(e.contains("unknown field `cofs`"), "{e}");
    let e = stderr_of(&["toric-mld", "missing.json"], 2);
    assert!(e.contains("missing.json"), "{e}");
    let e = stderr_of(&["germ-discrepancy", "ca7.json", "--weight", "1,1,1,1"], 1);
    assert!(e.contains("not admissible"), "{e}");
    let e = stderr_of(&["toric-lct", "quotient211.json", "--a", "1"], 1);
    assert!(e.contains("divisor"), "{e}");
    let e = stderr_of(&["toric-lct", "plane.json", "--a", "3"], 1);
    assert!(e.contains("below the requested"), "{e}");
    stderr_of(&["toric-mld", "quotient211.json", "--bogus"], 2);
    stderr_of(&["ct-scan", "--kind", "cD", "--k", "1", "--cap", "3"], 2);
    stderr_of(&["reid", "family", "1"], 1);
}

#[test]
fn output_is_deterministic_and_thread_independent() {
    let args = ["germ-weights", "ca7.json", "--budget", "31"];
    let a = run(&args, &[]);
    let b = run(&args, &[]);
    let c = run(&args, &[("MLDKIT_THREADS", "1")]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let bad = run(&args, &[("MLDKIT_THREADS", "zero")]);
    assert_eq!(bad.status.code(), Some(2));
}
