use std::path::Path;
use std::process::{Command, Output};

fn pebble(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pebble"))
        .current_dir(dir)
        .env_remove("PEBBLE_MAX_NODES")
        .env_remove("PEBBLE_MAX_TIME")
        .args(args)
        .output()
        .expect("run pebble")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn construct_families() {
    let dir = tempfile::tempdir().unwrap();
    let o = pebble(
        dir.path(),
        &[
            "construct",
            "middle-cycle",
            "--n",
            "2",
            "-o",
            "mc.json",
            "--dot",
            "mc.dot",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("mc.json")).unwrap()).unwrap();
    assert_eq!(json["vertices"].as_array().unwrap().len(), 8);
    assert!(std::fs::read_to_string(dir.path().join("mc.dot"))
        .unwrap()
        .starts_with("graph G {"));

    let o = pebble(
        dir.path(),
        &["construct", "product", "--left", "m-cycle:2", "--right", "mc.json"],
    );
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["vertices"].as_array().unwrap().len(), 64);

    let o = pebble(dir.path(), &["construct", "path", "--n", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n >= 1"));

    let o = pebble(
        dir.path(),
        &["construct", "delete", "--of", "m-path:4", "--remove", "v1,v4"],
    );
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["vertices"].as_array().unwrap().len(), 5);
}

#[test]
fn solve_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["solve", "-g", "m-cycle:2", "-d", r#"{"v2": 10}"#, "--target", "u0"];
    let o = pebble(dir.path(), &[&args[..], &["--witness", "w.json"]].concat());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("solvable, 3-move witness"));
    let o = pebble(dir.path(), &[&args[..], &["--replay", "w.json"]].concat());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // the same witness does not reach two pebbles
    let o = pebble(dir.path(), &[&args[..], &["--replay", "w.json", "-t", "2"]].concat());
    assert_eq!(o.status.code(), Some(1));

    let o = pebble(dir.path(), &["solve", "-g", "m-cycle:2", "-d", "{}", "--target", "u0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("unsolvable"));

    std::fs::write(dir.path().join("d.json"), r#"{"counts": {"v2": 1, "v3": 1, "u3": 3}}"#).unwrap();
    let o = pebble(
        dir.path(),
        &["solve", "-g", "m-path-trimmed:4", "-d", "d.json", "--target", "u1"],
    );
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));

    let o = pebble(
        dir.path(),
        &["solve", "-g", "m-cycle:2", "-d", "{}", "--target", "nowhere"],
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn pebbling_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let o = pebble(dir.path(), &["pebbling-number", "-g", "m-cycle:2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("f = 10"));

    let o = pebble(dir.path(), &["pebbling-number", "-g", "complete:4", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["value"], 4);

    let o = pebble(
        dir.path(),
        &["pebbling-number", "-g", "m-cycle:2", "--targets", "u0", "-t", "2"],
    );
    assert!(stdout(&o).starts_with("f_2 = "));
    assert!(stdout(&o).contains("targets restricted to u(0,1)"));

    let o = pebble(dir.path(), &["pebbling-number", "-g", "m-cycle:3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("inconclusive"));
}

#[test]
fn budget_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_pebble"))
        .current_dir(dir.path())
        .env("PEBBLE_MAX_NODES", "5")
        .args(["pebbling-number", "-g", "m-cycle:2"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn explain_strategies() {
    let dir = tempfile::tempdir().unwrap();
    let o = pebble(
        dir.path(),
        &[
            "explain",
            "cor2.7",
            "-g",
            "m-cycle:2",
            "-d",
            r#"{"v2": 10}"#,
            "--target",
            "u0",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("case 1"));

    let o = pebble(
        dir.path(),
        &[
            "explain",
            "cor2.3",
            "-g",
            "path:4",
            "-d",
            r#"{"v1": 4, "v4": 1}"#,
            "--target",
            "v3",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("weight 5 >= threshold 5"));

    let o = pebble(
        dir.path(),
        &[
            "explain",
            "cor2.7",
            "-g",
            "path:4",
            "-d",
            r#"{"v1": 4}"#,
            "--target",
            "v3",
        ],
    );
    assert_eq!(o.status.code(), Some(3));

    let o = pebble(
        dir.path(),
        &[
            "explain",
            "cor2.4",
            "-g",
            "m-path-trimmed:4",
            "-d",
            r#"{"u3": 6}"#,
            "--target",
            "u1",
            "--format",
            "json",
        ],
    );
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["succeeded"], true);
}

#[test]
fn verify_claims() {
    let dir = tempfile::tempdir().unwrap();
    let o = pebble(dir.path(), &["verify", "ineq22", "--m", "5..30", "--ledger", "l.jsonl"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("ineq22")).count(), 26);
    assert!(text.lines().skip(1).all(|l| l.contains("confirmed")));

    let o = pebble(dir.path(), &["verify", "cor24", "--n", "3..5", "--ledger", "l.jsonl"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("confirmed").count(), 3);

    let o = pebble(
        dir.path(),
        &[
            "verify", "graham", "--left", "path:2", "--right", "path:3", "--ledger", "l.jsonl",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("<= 2 * 4 = 8"));

    let ledger = std::fs::read_to_string(dir.path().join("l.jsonl")).unwrap();
    assert_eq!(ledger.lines().count(), 30);

    let o = pebble(dir.path(), &["verify", "lemma2.6", "--n", "3", "--no-ledger"]);
    assert_eq!(o.status.code(), Some(2));

    let o = pebble(dir.path(), &["verify", "nonsense", "--n", "3"]);
    assert_eq!(o.status.code(), Some(3));
}
