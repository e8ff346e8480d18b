use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn mmpg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmpg"))
        .args(args)
        .env_remove("MMPG_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn solve_json(dir: &Path, game: &str) -> String {
    let report = dir.join("report.json");
    let o = mmpg(&["solve", game, "--format", "json", "-o", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    report.to_str().unwrap().to_string()
}

#[test]
fn solve_then_verify_fig2() {
    let dir = TempDir::new().unwrap();
    let report = solve_json(dir.path(), "builtin:fig2");
    let o = mmpg(&["verify", "builtin:fig2", &report, "--horizon", "10000"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("PASS player 1"), "{text}");
    assert!(text.ends_with("verified\n"), "{text}");
}

#[test]
fn verify_rejects_a_reduced_incentive() {
    let dir = TempDir::new().unwrap();
    let report = solve_json(dir.path(), "builtin:fig2");
    let mut json: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let players = json["results"][0]["players"].as_array_mut().unwrap();
    let p1 = players.iter_mut().find(|p| p["player"] == 1).unwrap();
    p1["incentive"]["exact"] = Value::from("0");
    std::fs::write(&report, json.to_string()).unwrap();
    let o = mmpg(&["verify", "builtin:fig2", &report]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL stability[1]"), "{}", stdout(&o));
}

#[test]
fn verify_rejects_another_game() {
    let dir = TempDir::new().unwrap();
    let report = solve_json(dir.path(), "builtin:fig2");
    let o = mmpg(&["verify", "builtin:fig1", &report]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("fingerprint"));
}

#[test]
fn verify_needs_two_moves() {
    let dir = TempDir::new().unwrap();
    let report = solve_json(dir.path(), "builtin:fig1");
    let o = mmpg(&["verify", "builtin:fig1", &report, "--horizon", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(mmpg(&["solve"]).status.code(), Some(1));
    assert_eq!(mmpg(&["solve", "builtin:fig1", "--mode", "bogus"]).status.code(), Some(1));
    assert_eq!(mmpg(&["solve", "builtin:nope"]).status.code(), Some(1));
    assert_eq!(mmpg(&["solve", "/no/such/file.game"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.game");
    std::fs::write(&bad, "players 2 leader 0\nvertex a owner 5 initial\n").unwrap();
    let o = mmpg(&["solve", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn generated_games_solve_from_disk() {
    let dir = TempDir::new().unwrap();
    let game = dir.path().join("ring.game");
    let o = mmpg(&["generate", "token-ring", "--n", "4", "--d", "3", "-o", game.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = mmpg(&["compare", game.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.split_whitespace().take(2).eq(["incentive", "2/3"])), "{text}");
    assert!(text.lines().any(|l| l.split_whitespace().take(2).eq(["leader", "1/3"])), "{text}");
}

#[test]
fn bench_rows_are_reproducible() {
    let strip = |o: &Output| -> Vec<String> {
        stdout(o)
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect()
    };
    let args = ["bench", "random", "--seeds", "0..4", "--vertices", "8", "--players", "3"];
    let a = mmpg(&args);
    let b = mmpg(&[&args[..], &["--jobs", "3"]].concat());
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(strip(&a).len(), 5);
    assert!(strip(&a)[1..].iter().all(|row| row.ends_with(",true")));
}

#[test]
fn values_lists_every_vertex() {
    let o = mmpg(&["values", "builtin:fig2", "--player", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 12);
}
