use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heckestrat")).args(args).env_remove("HECKESTRAT_CACHE_DIR").output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn unknown_type_is_a_usage_error() {
    assert_eq!(run(&["cells", "--type", "Z9"]).status.code(), Some(2));
    assert_eq!(run(&["strat", "verify", "--type", "A2", "--e", "0"]).status.code(), Some(2));
    assert_eq!(run(&["qperm", "--type", "A2", "--lambda", "s7"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn cells_report_envelope() {
    let out = run(&["cells", "--type", "A2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["tool"], "heckestrat");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["coxeter_type"], "A2");
    assert_eq!(v["result"]["left_cells"].as_array().unwrap().len(), 4);
    assert!(v["config"].get("cache_dir").is_none());
}

#[test]
fn e_two_is_observational() {
    let out = run(&["strat", "verify", "--type", "A2", "--e", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "observational");
    assert_eq!(v["result"]["observational"], true);
}

#[test]
fn section_budget_gives_partial_report() {
    let out = run(&["strat", "verify", "--type", "A3", "--e", "3", "--section-budget", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["status"], "budget_exceeded");
    assert_eq!(v["config"]["section_budget"], 1);
}

#[test]
fn tsv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("qperm.tsv");
    let out = run(&["qperm", "--type", "A2", "--lambda", "s1", "--format", "tsv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# heckestrat"));
    assert_eq!(lines.next().unwrap(), "section\tcell\tdim\tf");
}

#[test]
fn jobs_do_not_change_output() {
    let a = run(&["direction", "verify", "--type", "B2", "--e", "4", "--jobs", "1"]);
    let b = run(&["direction", "verify", "--type", "B2", "--e", "4", "--jobs", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
