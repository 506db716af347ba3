use std::path::Path;
use std::process::{Command, Output};

use codiff::checks::Context;
use codiff::errata::Errata;

fn codiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_codiff")).args(args).output().expect("binary runs")
}

fn data(p: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(p).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table1_exits_zero_only_with_errata() {
    let o = codiff(&["table1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("known (errata)"));
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("errata.json");
    std::fs::write(&empty, r#"{"version": 1, "entries": []}"#).unwrap();
    let o = codiff(&["--errata", empty.to_str().unwrap(), "table1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("UNEXPECTED"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(codiff(&["catalog", "show", "d29"]).status.code(), Some(2));
    assert_eq!(codiff(&["extensions", "enumerate", "--case", "s9"]).status.code(), Some(2));
    assert_eq!(codiff(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(codiff(&["reproduce-all", "--only", "bogus"]).status.code(), Some(2));
    let o = codiff(&["fingerprint", "--in", "/nonexistent.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_reports_are_deterministic() {
    let args = ["--json", "reproduce-all", "--only", "table1,relations,jumps"];
    let a = codiff(&args);
    let b = codiff(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["command"], "reproduce-all");
    assert_eq!(v["result"].as_array().unwrap().len(), 3);
}

#[test]
fn corrupted_catalog_names_the_entry() {
    let dir = tempfile::tempdir().unwrap();
    for k in 1..=28 {
        std::fs::copy(data(&format!("catalog/d{}.json", k)), dir.path().join(format!("d{}.json", k))).unwrap();
    }
    let p = dir.path().join("d5.json");
    let text = std::fs::read_to_string(&p).unwrap().replacen("\"re\": \"1\"", "\"re\": \"2\"", 1);
    std::fs::write(&p, text).unwrap();
    let o = codiff(&["reproduce-all", "--only", "validity", "--data", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("validity/d5/square"), "{}", out);
    assert!(!out.contains("validity/d4"));
}

#[test]
fn catalog_show_embeds_the_file_format() {
    let o = codiff(&["--json", "catalog", "show", "d2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(data("catalog/d2.json")).unwrap()).unwrap();
    assert_eq!(v["result"]["file"], file);
}

#[test]
fn jump_graph_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("jumps.dot");
    let o = codiff(&["jump-graph", "--dot", dot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dot).unwrap();
    for k in 1..=28 {
        assert!(text.contains(&format!("  d{};", k)));
    }
    assert!(text.contains("d2 -> d1;"));
    assert_eq!(text.matches("->").count(), 51);
}

#[test]
fn iso_prints_witness_or_none() {
    let o = codiff(&["iso", "--a", &data("catalog/d3.json"), "--b", &data("catalog/d4.json")]);
    assert!(stdout(&o).starts_with("none found"));
    let o = codiff(&["--json", "iso", "--a", &data("catalog/d10.json"), "--b", &data("catalog/d10.json")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["result"]["witness"].is_array());
}

#[test]
fn subcommands_run() {
    for args in [
        vec!["catalog", "list"],
        vec!["cohomology", "--alg", "d25", "--max-degree", "3"],
        vec!["analyze", "--alg", "d24"],
        vec!["deform", "--alg", "d28", "--order", "4"],
        vec!["jumps", "--alg", "d25"],
        vec!["extensions", "enumerate", "--case", "s6-mu1"],
        vec!["extensions", "stable", "--even", "1", "--odd", "0", "--n", "2"],
    ] {
        let o = codiff(&args);
        assert_eq!(o.status.code(), Some(0), "{:?}: {}", args, String::from_utf8_lossy(&o.stderr));
    }
    let o = codiff(&["fingerprint", "--in", &data("catalog/d17.json")]);
    assert!(stdout(&o).contains("catalog: d17"));
}

#[test]
fn seed_list_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let seeds = dir.path().join("seeds.json");
    std::fs::write(&seeds, r#"{"seeds": ["2", "-5/3", "7", "13/2", "-11", "3/7"], "samples_per_branch": 4}"#).unwrap();
    let o = codiff(&["--json", "--seed-list", seeds.to_str().unwrap(), "jumps", "--alg", "d21"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let branch = &v["result"]["branches"][0];
    assert_eq!(branch["samples"].as_array().unwrap().len(), 4);
    std::fs::write(&seeds, r#"{"seeds": ["0"], "samples_per_branch": 1}"#).unwrap();
    assert_eq!(codiff(&["--seed-list", seeds.to_str().unwrap(), "jumps", "--alg", "d21"]).status.code(), Some(2));
}

/// Every computed-value errata entry matches a live discrepancy, and every
/// live discrepancy is either whitelisted or a pinned acceptance failure.
#[test]
fn errata_matches_computation() {
    let ctx = Context::new(codiff::default_plan());
    let (mut report, _) = codiff::commands::reproduce_all(&ctx, &[]);
    let errata = Errata::builtin();
    report.apply_errata(&errata);
    assert_eq!(report.unexpected().count(), 0, "{:?}", report.unexpected().collect::<Vec<_>>());
    for e in errata.entries.iter().filter(|e| e.computed.is_some()) {
        assert!(report.discrepancies.iter().any(|d| d.key == e.key), "stale errata entry {}", e.key);
    }
}
