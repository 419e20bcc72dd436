use std::process::{Command, Output};

fn cubring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubring"))
        .args(args)
        .env_remove("CUBRING_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn table_at_one() {
    let o = cubring(&["table", "--max", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "delta,h,hhat\n1,1/6,1/2\n");
}

#[test]
fn empty_table() {
    let o = cubring(&["table", "--max", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "delta,h,hhat\n");
    let o = cubring(&["table", "--max", "0", "--format", "json"]);
    assert_eq!(serde_json::from_str::<serde_json::Value>(&stdout(&o)).unwrap(), serde_json::json!([]));
}

#[test]
fn shard_counts_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for shards in ["1", "4"] {
        let path = dir.path().join(format!("t{shards}.csv"));
        let o = cubring(&["table", "--max", "120", "--shards", shards, "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        bytes.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    assert!(bytes[0].len() > 1000);
}

#[test]
fn verify_shards_agree() {
    let one = cubring(&["verify", "rhs", "lhs", "--max", "60", "--format", "json"]);
    let five = cubring(&["verify", "rhs", "lhs", "--max", "60", "--format", "json", "--shards", "5"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, five.stdout);
}

#[test]
fn verify_on_up_to_300() {
    let o = cubring(&["verify", "on", "--max", "300"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains(" 0 failures"));
}

#[test]
fn verify_recursion_single_disc() {
    let o = cubring(&["verify", "recursion", "--D", "1", "--p", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("recursion[p=2],1,"));
    assert!(out.contains("recursion-hat[p=2],1,"));
}

#[test]
fn every_check_passes_on_a_small_range() {
    let o = cubring(&["verify", "all", "--max", "50", "--primes", "2,3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn injected_fault_is_reported() {
    let o = cubring(&["verify", "on", "--max", "30", "--inject-fault", "-23"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("counterexample: on delta=-23"), "{err}");
}

#[test]
fn operational_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["verify", "nonsense"],
        &["table", "--shards", "0"],
        &["table", "--max", "1000", "--budget", "50"],
        &["dump-pic", "7"],
        &["table", "--config", "/nonexistent/run.toml"],
        &["frobnicate"],
    ];
    for args in cases {
        let o = cubring(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_cubring"))
        .args(["table", "--max", "10"])
        .env("CUBRING_BUDGET", "20")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_cubring"))
        .args(["table", "--max", "10", "--budget", "1000"])
        .env("CUBRING_BUDGET", "20")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "max = 1\nformat = \"json\"\n").unwrap();
    let o = cubring(&["table", "--config", cfg.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, serde_json::json!([{"delta": 1, "h": "1/6", "hhat": "1/2"}]));
    let o = cubring(&["table", "--config", cfg.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(stdout(&o), "delta,h,hhat\n1,1/6,1/2\n");
}

#[test]
fn zeta_and_pic() {
    let o = cubring(&["zeta", "--max", "1"]);
    assert_eq!(stdout(&o), "n,zeta_plus,zeta_minus,zhat_plus,zhat_minus\n1,1/6,0/1,0/1,1/2\n");
    let o = cubring(&["dump-pic", "-23"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["order"], 3);
    assert_eq!(v["torsion3"].as_array().unwrap().len(), 3);
    assert_eq!(v["reps"][0], "1,1,0@-23");
}

#[test]
fn config_file_budget_beats_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "budget = 1000\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cubring"))
        .args(["table", "--max", "10", "--config", cfg.to_str().unwrap()])
        .env("CUBRING_BUDGET", "20")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_cubring"))
        .args(["table", "--max", "1"])
        .env("CUBRING_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
