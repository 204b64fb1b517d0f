use std::fs;
use std::path::Path;

use cliquebound::bounds::clique_upper_hom;
use cliquebound::model::{build_matrix, sample_graph};
use cliquebound::solvers::{max_clique, Budget};
use cliquebound::ModelSpec;
use cliquebound_cli::{load_graph, run_command, CommandOutcome};
use serde_json::Value;

fn run(args: &[&str]) -> (CommandOutcome, String) {
    let mut argv = vec!["cliquebound".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut buf = Vec::new();
    let outcome = run_command(&argv, &mut buf);
    (outcome, String::from_utf8(buf).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    let graph = dir.path().join("graph.json");
    let result = dir.path().join("omega.json");
    fs::write(&model, r#"{"n": 40, "family": "constant", "p": 0.5}"#).unwrap();

    let (o, _) = run(&["generate", "--model", path(&model), "--seed", "3", "--trial", "2", "--out", path(&graph)]);
    assert_eq!(o.code, 0, "{}", o.summary);
    assert_eq!(o.outputs, vec![graph.clone()]);

    let (o, _) = run(&["solve", "--graph", path(&graph), "--what", "clique", "--out", path(&result)]);
    assert_eq!(o.code, 0, "{}", o.summary);
    let v = json(&fs::read_to_string(&result).unwrap());
    assert_eq!(v["quantity"], "omega");
    assert_eq!(v["exact"], true);

    let g = load_graph(&graph).unwrap();
    let expected = sample_graph(&build_matrix(&ModelSpec::constant(40, 0.5)).unwrap(), 3, 2);
    assert_eq!(g, expected);
    let lib = max_clique(&g, Budget::default());
    assert_eq!(v, serde_json::to_value(&lib).unwrap());

    for what in ["independent", "chromatic", "sandwich"] {
        let (o, out) = run(&["solve", "--graph", path(&graph), "--what", what]);
        assert_eq!(o.code, 0, "{what}: {}", o.summary);
        assert!(o.outputs.is_empty());
        assert!(out.ends_with('\n'));
        json(&out);
    }
}

#[test]
fn homogeneous_upper_bound_matches_library() {
    let (o, out) = run(&["bounds", "--statement", "clq-upper-hom", "--n", "100", "--p", "0.5", "--fn-log-n"]);
    assert_eq!(o.code, 0, "{}", o.summary);
    let v = json(&out);
    let u = v["threshold"].as_f64().unwrap();
    assert!((u - 27.575_424_759_098_9).abs() < 1e-9, "{u}");
    let lib = clique_upper_hom(100, 0.5, 100f64.ln()).unwrap();
    assert_eq!(v, serde_json::to_value(&lib).unwrap());
}

#[test]
fn precondition_failure_exits_one_with_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let (o, _) = run(&[
        "bounds", "--statement", "clq-main-i", "--n", "100", "--theta1", "0.3",
        "--eta", "0.1", "--gamma", "0.2", "--out", path(&out),
    ]);
    assert_eq!(o.code, 1, "{}", o.summary);
    let v = json(&fs::read_to_string(&out).unwrap());
    assert_eq!(v["status"], "precondition-failed");
    assert_eq!(v["reason"], "clq_condi violated: eta <= max(alpha1/2,a)+gamma");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).0.code, 2);
    assert_eq!(run(&["solve", "--what", "clique"]).0.code, 2);
    assert_eq!(run(&["bounds", "--statement", "no-such-thing"]).0.code, 2);
    assert_eq!(run(&["solve", "--graph", "/nonexistent/g.json", "--what", "clique"]).0.code, 2);
    let (o, out) = run(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(out.contains("generate"));
}

#[test]
fn graph_files_round_trip_and_reject_bad_edges() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.json");
    let text = "{\"n\":5,\"edges\":[[1,2],[1,5],[3,4]]}\n";
    fs::write(&f, text).unwrap();
    let g = load_graph(&f).unwrap();
    let mut buf = Vec::new();
    cliquebound_cli::save_result(&g, None, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), text);

    for bad in [
        r#"{"n":5,"edges":[[3,3]]}"#,
        r#"{"n":5,"edges":[[5,2]]}"#,
        r#"{"n":5,"edges":[[1,6]]}"#,
        r#"{"n":5,"edges":[[1,2],[1,2]]}"#,
    ] {
        fs::write(&f, bad).unwrap();
        assert!(load_graph(&f).is_err(), "{bad}");
        let (o, _) = run(&["solve", "--graph", path(&f), "--what", "clique"]);
        assert_eq!(o.code, 2, "{bad}");
    }
}

#[test]
fn experiment_and_summarize() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cfg.json");
    let results = dir.path().join("res.json");
    let csv = dir.path().join("res.csv");
    let table = dir.path().join("table.csv");
    fs::write(
        &config,
        r#"{"model": {"n": 30, "family": "constant", "p": 0.5}, "trials": 20,
            "events": [], "bound_refs": [{"statement": "clq-upper-hom"}]}"#,
    )
    .unwrap();
    let (o, _) = run(&[
        "experiment", "--config", path(&config), "--seed", "0", "--threads", "2",
        "--out", path(&results), "--csv", path(&csv),
    ]);
    assert_eq!(o.code, 0, "{}", o.summary);
    assert_eq!(o.outputs, vec![results.clone(), csv.clone()]);

    let (o, _) = run(&["summarize", "--results", path(&results), "--out", path(&table)]);
    assert_eq!(o.code, 0, "{}", o.summary);
    let t = fs::read_to_string(&table).unwrap();
    assert_eq!(t, fs::read_to_string(&csv).unwrap());
    assert_eq!(t.lines().count(), 2);
    assert!(t.lines().nth(1).unwrap().starts_with("clq-upper-hom,30,constant,p=0.5,"));
}

#[test]
fn parameter_search_and_helpers() {
    let (o, out) = run(&["bounds", "--statement", "feasible-clq-ii"]);
    assert_eq!(o.code, 0, "{}", o.summary);
    assert_eq!(json(&out)["status"], "feasible");

    let (o, out) = run(&["bounds", "--statement", "log-bounds", "--x", "0.3"]);
    assert_eq!(o.code, 0, "{}", o.summary);
    let v = json(&out);
    assert!(v["lower"].as_f64() < v["value"].as_f64());

    let (o, out) = run(&[
        "bounds", "--statement", "recursion", "--q", "1000", "--p", "0.5",
        "--delta", "0.05", "--epsilon", "0.1", "--L", "3",
    ]);
    assert_eq!(o.code, 0, "{}", o.summary);
    assert_eq!(json(&out)["q_seq"].as_array().unwrap().len(), 4);
}
