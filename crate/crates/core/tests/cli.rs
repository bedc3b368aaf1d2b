use std::fs;
use std::process::{Command, Output};

fn affkl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_affkl"))
        .args(args)
        .env_remove("AFFKL_CACHE")
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn kl_table_for_a1_is_all_ones() {
    let out = affkl(&[
        "table",
        "kl",
        "--type",
        "A",
        "--rank",
        "1",
        "--max-len",
        "3",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("y,w,polynomial"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() > 10);
    assert!(rows.iter().all(|r| r.ends_with(",1")), "{text}");
}

#[test]
fn zsigma_and_weights_for_the_adjoint_coweight() {
    let base = [
        "--type",
        "A",
        "--rank",
        "2",
        "--max-len",
        "8",
        "--lambda",
        "1,1",
        "--format",
        "csv",
    ];
    let out = affkl(&[&["table", "zsigma"][..], &base].concat());
    assert!(out.status.success());
    assert!(stdout(&out).contains("1 1,1 - 2*q + 2*q^2 - 2*q^3 + q^4"));

    let out = affkl(&[&["table", "weights"][..], &base].concat());
    let text = stdout(&out);
    assert!(text.contains("1 1,0 0,2"), "{text}");
    assert_eq!(text.lines().count(), 1 + 7);
}

#[test]
fn json_records_parse_and_pass() {
    let out = affkl(&[
        "verify",
        "--type",
        "C",
        "--rank",
        "2",
        "--max-len",
        "10",
        "--checks",
        "main,z,coset",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let records: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!records.is_empty());
    for r in &records {
        assert_eq!(r["system"]["type"], "C");
        assert_eq!(r["involution"], "*");
        assert_eq!(r["pass"], true);
        assert!(["main", "z", "coset"].contains(&r["check"].as_str().unwrap()));
    }
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("records.csv");
    let out = affkl(&[
        "verify",
        "--type",
        "A",
        "--rank",
        "1",
        "--max-len",
        "7",
        "--checks",
        "z",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("system,involution,check,identity,lambda,mu,subset,y,w,lhs,rhs,pass"));
}

#[test]
fn diamond_run_on_a_hyperspecial_vertex() {
    let out = affkl(&[
        "verify",
        "--type",
        "C",
        "--rank",
        "2",
        "--involution",
        "diamond:2",
        "--max-len",
        "10",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let records: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert!(records.iter().any(|r| r["check"] == "diamond"));
    assert!(records.iter().all(|r| r["involution"] == "diamond:2"));
}

#[test]
fn foreign_cache_is_ignored_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let cache = cache.to_str().unwrap();
    let a1 = [
        "verify",
        "--type",
        "A",
        "--rank",
        "1",
        "--max-len",
        "8",
        "--checks",
        "main",
        "--cache",
        cache,
    ];
    let first = affkl(&a1);
    assert!(first.status.success());
    let a2 = [
        "verify",
        "--type",
        "A",
        "--rank",
        "2",
        "--max-len",
        "8",
        "--checks",
        "main",
        "--cache",
        cache,
    ];
    let cold = affkl(&a2);
    assert!(cold.status.success());
    assert!(stderr(&cold).contains("starting cold"), "{}", stderr(&cold));

    // a truncated file is rejected as a whole
    let text = fs::read_to_string(cache).unwrap();
    let cut: String = text.lines().take(3).map(|l| format!("{l}\n")).collect();
    fs::write(cache, cut).unwrap();
    let again = affkl(&a2);
    assert!(again.status.success());
    assert!(stderr(&again).contains("rejected"), "{}", stderr(&again));
    assert_eq!(again.stdout, cold.stdout);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["frobnicate"][..],
        &["verify", "--type", "A"],
        &["verify", "--type", "A", "--rank", "0"],
        &["verify", "--type", "A", "--rank", "2", "--checks", "everything"],
        &["verify", "--type", "A", "--rank", "2", "--format", "xml"],
        &["verify", "--type", "A", "--rank", "2", "--jobs", "0"],
        &["verify", "--type", "A", "--rank", "2", "--involution", "diamond:7"],
        &["table", "nothing", "--type", "A", "--rank", "2"],
    ] {
        let out = affkl(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(affkl(&["--help"]).status.code(), Some(0));
    assert_eq!(affkl(&["verify", "--help"]).status.code(), Some(0));
}
