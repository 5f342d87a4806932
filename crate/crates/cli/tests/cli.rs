use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn collide(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_collide"))
        .args(args)
        .output()
        .expect("spawn collide")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut v: Vec<&str> = args.to_vec();
    v.extend(["--out", dir.to_str().unwrap()]);
    collide(&v)
}

#[test]
fn reproduce_small_tables_succeed() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(tmp.path(), &["reproduce", "2", "--deg", "1:8"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = fs::read_to_string(tmp.path().join("summary.csv")).unwrap();
    assert!(summary.starts_with("degree,candidates,successes,inconclusive\n"));
    assert!(summary.contains("\n7,18,7,0\n"));
    assert!(tmp.path().join("manifest.json").exists());

    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(tmp.path(), &["reproduce", "1", "--n", "1:5"]);
    assert_eq!(out.status.code(), Some(0));
    let f = fs::read_to_string(tmp.path().join("factors.csv")).unwrap();
    assert!(f.starts_with("n,degree,multiplicity\n"));
}

#[test]
fn reproduce_is_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [a.path(), b.path()] {
        let out = run_in(d, &["reproduce", "4", "--deg", "1:6"]);
        assert_eq!(out.status.code(), Some(0));
    }
    for name in ["summary.csv", "records.csv"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let base = ["search", "--p", "3", "--d", "2", "--points", "0,1", "--target", "2", "--deg", "1:5"];
    let mut one = base.to_vec();
    one.extend(["--threads", "1", "--format", "json"]);
    let mut four = base.to_vec();
    four.extend(["--threads", "4", "--format", "json"]);
    assert_eq!(run_in(a.path(), &one).status.code(), Some(0));
    assert_eq!(run_in(b.path(), &four).status.code(), Some(0));
    assert_eq!(
        fs::read(a.path().join("results.json")).unwrap(),
        fs::read(b.path().join("results.json")).unwrap()
    );
}

#[test]
fn resume_reuses_checkpoints() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["search", "--p", "2", "--d", "3", "--points", "0,1", "--target", "1", "--deg", "1:6"];
    assert_eq!(run_in(tmp.path(), &args).status.code(), Some(0));
    let first = fs::read(tmp.path().join("records.csv")).unwrap();
    let ck = fs::read_dir(tmp.path().join("checkpoints")).unwrap().count();
    assert_eq!(ck, 6);
    let mut again = args.to_vec();
    again.push("--resume");
    assert_eq!(run_in(tmp.path(), &again).status.code(), Some(0));
    assert_eq!(fs::read(tmp.path().join("records.csv")).unwrap(), first);
}

#[test]
fn bad_configuration_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    for args in [
        &["reproduce", "11"][..],
        &["search", "--p", "4", "--d", "2", "--points", "0", "--target", "1", "--deg", "1:2"],
        &["search", "--p", "3", "--points", "0", "--target", "1", "--deg", "1:2"],
        &["addcase", "--p", "3", "--l", "1", "--delta1", "0", "--delta2", "1"],
        &["heights", "--p", "5", "--alpha", "[0,1]/[0]", "--lambda", "[1]", "--d", "2"],
    ] {
        let out = run_in(tmp.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn unwritable_output_exits_1() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = run_in(&blocker.join("sub"), &["reproduce", "2", "--deg", "1:2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn addcase_report() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(
        tmp.path(),
        &["addcase", "--p", "3", "--q-ext", "2", "--l", "1", "--delta1", "3", "--delta2", "7"],
    );
    assert_eq!(out.status.code(), Some(0));
    let rep = fs::read_to_string(tmp.path().join("addcase.txt")).unwrap();
    assert!(rep.contains("verdict: EMPTY"));

    let out = run_in(
        tmp.path(),
        &["addcase", "--p", "2", "--k", "2", "--l", "1", "--delta1", "1", "--delta2", "2", "--alpha1", "1", "--emit-lambdas", "4"],
    );
    assert_eq!(out.status.code(), Some(0));
    let rep = fs::read_to_string(tmp.path().join("addcase.txt")).unwrap();
    assert!(rep.contains("verdict: INFINITE"));
    assert_eq!(rep.matches(": valid").count(), 4);
}

#[test]
fn heights_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(tmp.path(), &["heights", "--p", "5", "--alpha", "[0,1]", "--lambda", "[1]", "--d", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(tmp.path().join("heights.csv")).unwrap();
    assert_eq!(
        csv,
        "alpha,lambda,d,hhat_num,hhat_den,exact,lower_ok,upper_ok\n\"[0,1]\",[1],2,1,1,true,true,true\n"
    );
}
