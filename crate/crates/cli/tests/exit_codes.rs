use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nearsphere")).args(args).output().unwrap()
}

fn config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name).to_str().unwrap().to_string()
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(64));
    assert_eq!(run(&[]).status.code(), Some(64));
    assert_eq!(run(&["eval"]).status.code(), Some(64));
    assert_eq!(run(&["eval", "--bogus-flag"]).status.code(), Some(64));
}

#[test]
fn validation_errors_exit_2() {
    let dir = std::env::temp_dir().join(format!("nearsphere-exit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"curvature": 3, "n": 2, "rho": 1.0, "grid_exactness": 8}"#).unwrap();
    assert_eq!(run(&["eval", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(run(&["eval", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--config", dir.join("missing.json").to_str().unwrap()]).status.code(), Some(2));
    // T1.1 is not stated in Euclidean space
    std::fs::write(&bad, r#"{"curvature": 0, "n": 2, "rho": 1.0, "grid_exactness": 8, "task": {"theorem": "T1.1"}}"#)
        .unwrap();
    assert_eq!(run(&["stability-sweep", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--config", &config("euclidean_ball.json"), "--threads", "0"]).status.code(), Some(2));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn csv_goes_to_stdout_without_out() {
    let o = run(&["eval", "--config", &config("euclidean_ball.json"), "--threads", "1", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("quantity,k,value,ball_value,difference\nvolume,,"), "{text}");
}
