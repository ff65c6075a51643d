use std::fs;
use std::process::{Command, Output};

fn tadpole(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tadpole")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn default_run_is_p3_table() {
    let o = tadpole(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("Q7 fibration over P3, L = O(1)\n"), "{s}");
    assert!(s.contains("chi(Y) = 24"));
}

#[test]
fn csv_rows() {
    let o = tadpole(&["verify", "--base", "P1", "--emit", "csv"]);
    assert_eq!(stdout(&o), "degree,lhs,rhs,equal\n0,0,0,true\n1,12*H,12*H,true\n");
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"base": {"kind": "Pn", "n": 1}, "L": {"degree": 2}, "emit": "json"}"#).unwrap();
    let cfg = cfg.to_str().unwrap();

    let o = tadpole(&["verify", "--config", cfg]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["base"], "P1");
    assert_eq!(v["config"]["L"], 2);
    assert_eq!(v["lhs"]["chi"], 24);

    let o = tadpole(&["verify", "--config", cfg, "--variant", "printed"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["variant"]["delta_rule"], "printed");
    assert_eq!(v["verdict"], "fail");
}

#[test]
fn fiber_table_override_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("override.json");
    fs::write(&cfg, r#"{"base": {"kind": "Pn", "n": 1}, "fiber_tables": {"D1~": [["B", 2], ["D1", 3]]}}"#).unwrap();
    let o = tadpole(&["verify", "--config", cfg.to_str().unwrap(), "--emit", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["variant"]["fiber_tables"], "override");
}

#[test]
fn missing_or_broken_config_is_usage_error() {
    assert_eq!(tadpole(&["verify", "--config", "/nonexistent/run.json"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"base": {"kind": "formal", "dim": 5}}"#).unwrap();
    let o = tadpole(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("outside 0..=4"));
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = tadpole(&["verify", "--base", "formal:3", "--emit", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let direct = tadpole(&["verify", "--base", "formal:3", "--emit", "json"]);
    assert_eq!(fs::read(&path).unwrap(), direct.stdout);
    let v: serde_json::Value = serde_json::from_slice(&direct.stdout).unwrap();
    assert!(v.get("orientifold").is_none());
    assert!(v["config"].get("L").is_none());
}

#[test]
fn verify_all_json_and_csv() {
    let o = tadpole(&["verify-all", "--emit", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 24);
    assert!(rows.iter().all(|r| r["verdict"] == r["expected"]));
    assert_eq!(rows[1]["rhs_chi"], "14");

    let o = tadpole(&["verify-all", "--emit", "csv", "--with-p4"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("base,L,delta_rule,lhs_chi,rhs_chi,verdict,expected\nP1,1,definition-sd,12,12,pass,pass\n"));
    assert_eq!(s.lines().count(), 31);
    assert_eq!(s, stdout(&tadpole(&["verify-all", "--emit", "csv", "--with-p4"])));
}

#[test]
fn chi_subcommand() {
    let o = tadpole(&["chi", "--space", "nodal-quartic-P3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "chi(nodal-quartic-P3) = 16\n");
    assert_eq!(tadpole(&["chi", "--space", "klein-bottle"]).status.code(), Some(2));
    assert_eq!(tadpole(&["chi"]).status.code(), Some(2));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(tadpole(&["--help"]).status.code(), Some(0));
    assert_eq!(tadpole(&["--version"]).status.code(), Some(0));
    assert_eq!(tadpole(&[]).status.code(), Some(2));
}
