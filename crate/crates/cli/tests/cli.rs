use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fpark(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpark")).args(args).output().expect("spawn fpark")
}

fn fpark_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpark")).args(args).env("FPARK_THREADS", threads).output().expect("spawn fpark")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn diagnostic(o: &Output) -> serde_json::Value {
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    serde_json::from_str(err.lines().last().expect("diagnostic line")).expect("json diagnostic")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn strongly_parked_count_at_four() {
    let o = fpark(&["enumerate", "--quantity", "sp", "--n", "4"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["rows"][0]["value"], "720");
}

#[test]
fn coupling_runs_verify() {
    let o = fpark(&["couple-verify", "--n", "100", "--m", "120", "--replicas", "100", "--seed", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().all(|r| r.contains(",true,ok")));
}

#[test]
fn injected_faults_are_caught() {
    for fault in ["reverse", "mutate:3"] {
        let o = fpark(&["couple-verify", "--n", "30", "--replicas", "3", "--fault", fault]);
        assert_eq!(o.status.code(), Some(4), "fault {fault}");
        assert_eq!(diagnostic(&o)["error"], "verification_failed");
    }
}

#[test]
fn empty_graph_is_rejected() {
    let o = fpark(&["simulate-frozen", "--n", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let d = diagnostic(&o);
    assert_eq!(d["error"], "invalid_size");
    assert_eq!(d["exit_code"], 2);
    assert!(o.stdout.is_empty());
}

#[test]
fn bad_values_are_rejected() {
    for args in [
        &["simulate-frozen", "--n", "10", "--p", "1.5"][..],
        &["simulate-frozen", "--n", "10", "--lambda-grid", "1:0:0"],
        &["couple-verify", "--n", "10", "--fault", "sideways"],
        &["enumerate", "--quantity", "nothing", "--n", "3"],
    ] {
        let o = fpark(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn caps_give_exit_three() {
    let o = fpark(&["simulate-frozen", "--n", "100", "--cap", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(diagnostic(&o)["error"], "cap_exceeded");
    let o = fpark(&["oracle", "--quantity", "pf", "--n", "6", "--m", "6", "--cap", "100"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn oracle_agrees() {
    let o = fpark(&["oracle", "--quantity", "pf_root", "--n", "5", "--m", "3"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["rows"][0]["equal"], true);
}

#[test]
fn output_is_byte_identical_across_runs_and_threads() {
    let args = ["simulate-frozen", "--n", "2000", "--replicas", "6", "--seed", "9", "--lambda-grid", "-1:1:0.5"];
    let a = fpark_threads(&args, "1");
    let b = fpark_threads(&args, "4");
    let c = fpark(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);

    let args = ["simulate-parking", "--n", "300", "--replicas", "5", "--seed", "2"];
    assert_eq!(fpark_threads(&args, "1").stdout, fpark_threads(&args, "3").stdout);
}

#[test]
fn file_output_writes_manifest() {
    let out = scratch("er.csv");
    let o = fpark(&["simulate-er", "--n", "500", "--replicas", "3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let data = fs::read_to_string(&out).unwrap();
    assert!(data.lines().any(|l| l.starts_with("n,seed,lambda")));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(format!("{}.manifest.json", out.display())).unwrap()).unwrap();
    assert_eq!(manifest["replica_seeds"].as_array().unwrap().len(), 3);
    assert_eq!(manifest["rows"], 15);
    assert_eq!(manifest["config"]["n"], 500);
}

#[test]
fn flags_override_config_file() {
    let cfg = scratch("frozen.cfg");
    fs::write(&cfg, "# frozen run\nn = 400\nreplicas = 2\nlambda_grid = 0\nseed = 5\n").unwrap();
    let path = cfg.to_str().unwrap();
    let from_file = fpark(&["simulate-frozen", "--config", path]);
    let explicit = fpark(&["simulate-frozen", "--n", "400", "--replicas", "2", "--lambda-grid", "0", "--seed", "5"]);
    assert!(from_file.status.success());
    let body = |o: &Output| stdout(o).lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&from_file), body(&explicit));

    let overridden = fpark(&["simulate-frozen", "--config", path, "--n", "300"]);
    assert!(stdout(&overridden).lines().any(|l| l.starts_with("300,")));

    fs::write(&cfg, "n = 4\nbogus = 1\n").unwrap();
    assert_eq!(fpark(&["simulate-frozen", "--config", path]).status.code(), Some(2));
}

#[test]
fn json_rows_carry_full_precision() {
    let o = fpark(&["numerics", "--quantity", "p1", "--x", "0"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let p = doc["rows"][0]["p1"].as_f64().unwrap();
    assert!((p - 0.258_819_403_792_806_8).abs() < 1e-15);
}

#[test]
fn accept_runs_selected_criteria() {
    let o = fpark(&["accept", "--criteria", "2,6"]);
    assert!(o.status.success());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("[PASS]  2"));
    assert!(err.contains("[PASS]  6"));
    assert!(!err.contains("[PASS]  1 "));
}
