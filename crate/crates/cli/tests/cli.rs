use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rigidity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigidity")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn gen_is_seeded_and_feeds_other_commands() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt").display().to_string();
    let a = rigidity(&["--seed", "4", "gen", "--n", "60", "--p", "c/n:5", "--out", &g]);
    assert_eq!(code(&a), 0);
    let again = rigidity(&["--seed", "4", "gen", "--n", "60", "--p", "c/n:5"]);
    assert_eq!(fs::read(&g).unwrap(), again.stdout);

    let core = rigidity(&["core", "--in", &g]);
    assert_eq!(code(&core), 0);
    let v = json(&core);
    assert_eq!(v["n"], 60);
    assert_eq!(v["core_size"].as_u64().unwrap() + v["outside_size"].as_u64().unwrap(), 60);

    let canon = rigidity(&["canon", "--in", &g]);
    assert_eq!(code(&canon), 0);
    assert!(json(&canon)["outcome"].is_string());

    let aut = rigidity(&["aut", "--in", &g, "--core"]);
    assert_eq!(code(&aut), 0);
    assert!(json(&aut)["order"].is_string());

    let census = rigidity(&["census", "--in", &g, "--pairs", "500"]);
    assert_eq!(code(&census), 0);
    assert!(json(&census)["pairs"].as_u64().unwrap() <= 500);
}

#[test]
fn iso_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // a tree and two labelings of it, plus a different tree
    let a = write(dir.path(), "a.txt", "5 4\n0 1\n1 2\n2 3\n1 4\n");
    let b = write(dir.path(), "b.txt", "5 4\n4 3\n3 2\n2 1\n3 0\n");
    let c = write(dir.path(), "c.txt", "5 4\n0 1\n0 2\n0 3\n0 4\n");
    assert_eq!(code(&rigidity(&["iso", "--g", &a, "--h", &b])), 0);
    assert_eq!(code(&rigidity(&["iso", "--g", &a, "--h", &c])), 1);
    // K4 always fails the heuristic
    let k4 = write(dir.path(), "k4.txt", "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    let o = rigidity(&["iso", "--g", &k4, "--h", &k4]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["outcome"], "undecided");
}

#[test]
fn deck_round_trip_and_small_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt").display().to_string();
    assert_eq!(code(&rigidity(&["--seed", "1", "gen", "--n", "60", "--p", "clogn/n:1.8", "--out", &g])), 0);
    let cards = dir.path().join("deck").display().to_string();
    assert_eq!(code(&rigidity(&["deck", "--in", &g, "--dir", &cards])), 0);
    let manifest: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("deck/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["cards"].as_array().unwrap().len(), 60);
    let out = dir.path().join("r.txt").display().to_string();
    let r = rigidity(&["recon", "--deck", &cards, "--out", &out]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(code(&rigidity(&["iso", "--g", &g, "--h", &out])), 0);

    let c5 = write(dir.path(), "c5.txt", "5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n");
    let c5deck = dir.path().join("c5").display().to_string();
    assert_eq!(code(&rigidity(&["deck", "--in", &c5, "--dir", &c5deck])), 0);
    let fail = rigidity(&["recon", "--deck", &c5deck]);
    assert_eq!(code(&fail), 1);
    assert_eq!(json(&fail)["step"], "overlay");
    let small = rigidity(&["recon", "--deck", &c5deck, "--small"]);
    assert_eq!(code(&small), 0);
    assert!(String::from_utf8_lossy(&small.stdout).starts_with("5 5\n"));
}

#[test]
fn prob_commands() {
    let v = rigidity(&["prob", "verify-lemma1", "--max-m", "5", "--max-k", "3", "--denominator", "10"]);
    assert_eq!(code(&v), 0);
    assert_eq!(json(&v)["failures"].as_array().unwrap().len(), 0);
    let p = rigidity(&["prob", "pi-profile", "--k", "10", "--p", "0.3", "--m", "1,2,3"]);
    assert_eq!(code(&p), 0);
    assert_eq!(json(&p)["rows"].as_array().unwrap().len(), 3);
    assert_eq!(code(&rigidity(&["prob", "pi-profile", "--k", "10", "--p", "0.7"])), 3);
}

#[test]
fn experiment_reports_are_worker_independent() {
    let run = |w: &str, fmt: &str| {
        rigidity(&["--seed", "9", "--workers", w, "--format", fmt, "experiment", "core-size", "--n", "500", "--p", "c/n:4", "--trials", "10"])
    };
    let a = run("1", "json");
    let b = run("3", "json");
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["summary"]["pass"].as_u64().unwrap() + v["summary"]["fail"].as_u64().unwrap() + v["summary"]["undecided"].as_u64().unwrap(), 10);
    let csv = run("2", "csv");
    let text = String::from_utf8(csv.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("experiment,n,p,np,trials"));
    assert!(lines.next().unwrap().starts_with("core-size,500,"));
}

#[test]
fn experiment_min_rate_gates_exit_code() {
    let base = ["--seed", "2", "experiment", "core-size", "--n", "400", "--p", "c/n:4", "--trials", "5"];
    assert_eq!(code(&rigidity(&[&base[..], &["--min-rate", "0.5"]].concat())), 0);
    // n/10 = 40 outside vertices is never reached at np = 4, so every trial passes
    assert_eq!(code(&rigidity(&[&base[..], &["--min-rate", "1.01"]].concat())), 1);
}

#[test]
fn usage_and_input_errors_exit_3() {
    assert_eq!(code(&rigidity(&[])), 3);
    assert_eq!(code(&rigidity(&["experiment", "nonsense", "--n", "5", "--p", "0.1"])), 3);
    assert_eq!(code(&rigidity(&["core", "--in", "/nonexistent/file"])), 3);
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "3 1\n0 0\n");
    let o = rigidity(&["core", "--in", &bad]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(code(&rigidity(&["--help"])), 0);
}

#[test]
fn budget_exhaustion_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let e = write(dir.path(), "e.txt", "30 0\n");
    assert_eq!(code(&rigidity(&["aut", "--in", &e, "--budget", "5"])), 2);
}
