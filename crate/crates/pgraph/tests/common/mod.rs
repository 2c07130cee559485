#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::Command;

use serde_json::Value;

pub const BIN: &str = env!("CARGO_BIN_EXE_pgraph");

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", self.stdout))
    }
}

pub fn run(args: &[&str]) -> Run {
    run_with_env(args, &[])
}

pub fn run_with_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(BIN);
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("spawn pgraph");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub const SMALL_GRAPH: &str = r#"{"vertices":[{"id":0,"m":1,"c":0},{"id":1,"m":2,"c":0.5},{"id":2}],
"edges":[{"x":0,"y":1,"b":1},{"x":1,"y":2,"b":0.5}],"interior":[1]}"#;

/// Invocations that together reach every registered operation.
pub fn coverage_runs(graph_file: &Path) -> Vec<Vec<String>> {
    let file = graph_file.display().to_string();
    let runs: Vec<Vec<&str>> = vec![
        vec!["apply", "--model", "nat_line", "--radius", "6", "--u", "hardy", "--phi", "random"],
        vec!["apply", "--graph", &file],
        vec!["energy", "--model", "grid2d", "--radius", "3", "--u", "const:1", "--p", "3"],
        vec!["gsr", "--model", "nat_line", "--radius", "10", "--u", "hardy"],
        vec!["picone", "--model", "grid2d", "--radius", "3", "--u", "random", "--p", "1.5", "--trials", "50"],
        vec!["capacity", "--model", "int_line", "--radius", "8"],
        vec!["null-seq", "--model", "int_line", "--radius", "16", "--u", "const:1"],
        vec!["harnack", "--model", "nat_line", "--radius", "6", "--subset", "1..2", "--u", "hardy"],
        vec!["hardy", "--model", "nat_line", "--radius", "16", "--subset", "1..8", "--root", "8"],
        vec!["liouville", "--model", "int_line", "--radius", "16", "--compare-scale", "0.5"],
        vec!["liouville", "--model", "int_line", "--radius", "16", "--transfer", "--p", "3"],
        vec!["ineq-scan", "--kernel", "ineq2", "--p", "3", "--a-step", "0.1", "--t-step", "0.01"],
        vec!["ineq-scan", "--kernel", "ineq1", "--a-step", "0.1", "--t-step", "0.01"],
        vec!["ineq-scan", "--kernel", "ineq34", "--p", "3", "--a-step", "0.1", "--t-step", "0.01"],
        vec!["ineq-scan", "--kernel", "ineq5", "--p", "3"],
        vec!["ineq-scan", "--kernel", "lindqvist", "--p", "3", "--a-step", "0.1"],
        vec!["ineq-scan", "--kernel", "cp", "--p", "3"],
        vec!["model-check", "--model", "nat_line", "--radius", "8"],
        vec!["model-check", "--model", "int_line", "--radius", "4"],
        vec!["model-check", "--model", "grid2d", "--radius", "3"],
        vec!["model-check", "--model", "weighted_line", "--weights", "1,2,3,4", "--radius", "4"],
    ];
    runs.into_iter().map(|r| r.into_iter().map(String::from).collect()).collect()
}

/// Runs every coverage invocation and returns the operations each subcommand
/// reported, or a description of the first invocation that failed.
pub fn collect_ops(graph_file: &Path) -> Result<BTreeMap<String, BTreeSet<String>>, String> {
    let mut seen: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for args in coverage_runs(graph_file) {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let r = run(&refs);
        if r.code != 0 {
            return Err(format!("`pgraph {}` exited {}: {}", args.join(" "), r.code, r.stderr.trim()));
        }
        let doc = r.json();
        let ops = doc["ops"].as_array().ok_or("report without ops")?;
        let entry = seen.entry(doc["command"].as_str().unwrap_or_default().to_string()).or_default();
        entry.extend(ops.iter().filter_map(|o| o.as_str().map(String::from)));
    }
    Ok(seen)
}

/// Checks that the reported operations cover the registry and that each was
/// reported by its registered subcommand.
pub fn check_registry(seen: &BTreeMap<String, BTreeSet<String>>) -> Result<usize, String> {
    let all: BTreeSet<String> = pgraph::registry::all_operations().into_iter().map(String::from).collect();
    let reported: BTreeSet<String> = seen.values().flatten().cloned().collect();
    let missing: Vec<&String> = all.difference(&reported).collect();
    if !missing.is_empty() {
        return Err(format!("unreachable operations: {missing:?}"));
    }
    let unknown: Vec<&String> = reported.difference(&all).collect();
    if !unknown.is_empty() {
        return Err(format!("unregistered operations reported: {unknown:?}"));
    }
    for op in &all {
        let home = pgraph::registry::subcommand_of(op).ok_or(format!("{op} has no subcommand"))?;
        if !seen.get(home).is_some_and(|ops| ops.contains(op)) {
            return Err(format!("{op} is registered under {home} but not reported there"));
        }
    }
    Ok(all.len())
}
