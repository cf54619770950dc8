use std::fs;
use std::process::{Command, Output};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bench"))
        .args(args)
        .output()
        .expect("bench binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn problems_list() {
    let o = bench(&["problems", "list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 42);
    assert!(text.lines().any(|l| l.split_whitespace().eq(["rosenbr", "2"])));
    assert!(text.lines().any(|l| l.split_whitespace().eq(["watson", "12"])));
}

#[test]
fn run_writes_markdown_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results.md");
    let o = bench(&[
        "run",
        "--variants",
        "lmqn,ilmqn-a",
        "--eps",
        "1e-3",
        "--replicates",
        "2",
        "--problems",
        "rosenbr,beale,tridia",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let md = fs::read_to_string(out).unwrap();
    assert!(md.contains("| 1e-3 | LMQN | 3/3 |"), "{md}");
    assert!(md.contains("| iLMQN-a |"));
}

#[test]
fn csv_output_is_deterministic() {
    let args = [
        "run", "--variants", "ilmqn-b", "--eps", "1e-5", "--replicates", "3", "--problems", "rosenbr,helix",
        "--format", "csv", "--seed-base", "7",
    ];
    let a = bench(&args);
    let b = bench(&args);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).starts_with("epsilon,variant,"));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        vec!["run", "--problems", "nosuch"],
        vec!["run", "--variants", "lbfgs"],
        vec!["run", "--eps", "2"],
        vec!["run", "--format", "xml"],
        vec!["run", "--replicates", "0"],
        vec!["frobnicate"],
        vec!["audit", "--in", "/nonexistent/traces.jsonl"],
    ] {
        let o = bench(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn traces_pass_audit_and_tampering_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let traces = dir.path().join("traces.jsonl");
    let o = bench(&[
        "run",
        "--variants",
        "lmqn,ilmqn-a,lmqn-h",
        "--eps",
        "1e-3",
        "--replicates",
        "2",
        "--problems",
        "rosenbr,tridia,beale",
        "--trace",
        "--trace-out",
        traces.to_str().unwrap(),
        "--out",
        dir.path().join("r.md").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&traces).unwrap();
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    for key in ["problem", "variant", "k", "x", "delta", "rho", "accepted", "tiers_used", "exact_f"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }

    let o = bench(&["audit", "--in", traces.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("result: PASS"));

    // Make an accepted LMQN step increase the exact objective.
    let mut lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let victim = lines
        .iter_mut()
        .find(|v| v["variant"] == "lmqn" && v["accepted"] == true)
        .unwrap();
    let f = victim["exact_f"].as_f64().unwrap();
    victim["exact_f_trial"] = serde_json::json!(f + 1.0);
    let tampered = dir.path().join("tampered.jsonl");
    let body: String = lines.iter().map(|v| format!("{v}\n")).collect();
    fs::write(&tampered, body).unwrap();
    let o = bench(&["audit", "--in", tampered.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("result: FAIL"));
}

#[test]
fn malformed_trace_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.jsonl");
    fs::write(&p, "{\"problem\": 3}\n").unwrap();
    assert_eq!(bench(&["audit", "--in", p.to_str().unwrap()]).status.code(), Some(1));
}
