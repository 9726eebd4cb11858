use std::path::PathBuf;
use std::process::{Command, Output};

use condorcet_rank::harness::ExperimentReport;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_condorcet-rank"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn rate_prints_a_csv_ranking() {
    let data = fixture("golden/five_votes.soc");
    let text = stdout(&run(&[
        "rate",
        "--dataset",
        data.to_str().unwrap(),
        "--method",
        "kemeny",
    ]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "rank,id,alternative,score");
    assert!(lines[1].starts_with("1,3,C"));
    assert_eq!(lines.len(), 4);
}

#[test]
fn rate_writes_json_that_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rate.json");
    let data = fixture("golden/five_votes.soc");
    let status = run(&[
        "rate",
        "--dataset",
        data.to_str().unwrap(),
        "--method",
        "copeland",
        "--seed",
        "4",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(stdout(&status).is_empty());
    let report = ExperimentReport::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.experiment, "rate");
    assert_eq!(report.seeds, vec![4]);
    assert_eq!(report.rows.len(), 3);
}

#[test]
fn tournament_reads_a_toml_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("grid.toml");
    std::fs::write(
        &config,
        "seeds = 2\nns = [10]\nmatchings = [\"uniform\"]\nmethods = [\"borda\", \"sigmoid-sco\"]\niterations = 300\n",
    )
    .unwrap();
    let args = ["tournament", "--config", config.to_str().unwrap(), "--summary"];
    let first = stdout(&run(&args));
    assert!(first.starts_with("matching,n,method,count,mean_ktd"));
    assert_eq!(first.lines().count(), 3);
    assert_eq!(first, stdout(&run(&args)), "same seed, same output");
}

#[test]
fn errors_are_reported_as_json_with_a_failing_status() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    std::fs::write(&config, "bogus = 1\n").unwrap();
    let out = run(&["warmup", "--config", config.to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    let line = err.lines().last().unwrap();
    let value: serde_json::Value = serde_json::from_str(line).unwrap();
    assert!(value["error"].as_str().unwrap().contains("bogus"));

    let out = run(&["rate", "--dataset", fixture("malformed/tie.soi").to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 4"));

    let out = run(&["rate"]);
    assert!(!out.status.success());
}
