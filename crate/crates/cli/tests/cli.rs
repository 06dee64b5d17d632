//! End-to-end runs of the `mu2forge` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mu2forge")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn golden(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../golden");
    std::fs::read_to_string(dir.join(name)).expect("golden file exists")
}

#[test]
fn double_negation_elimination_holds_under_p() {
    let o = run(&["eq", "--theory", "p", "C[s] (\\k. k M)", "M"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("Equal"));
}

#[test]
fn distinct_sides_exit_one() {
    let o = run(&["eq", "--theory", "beta-eta", "--ctx", "x : bot", "x [bot]", "x"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("Distinct"));
    let o = run(&["eq", "--theory", "p", "--ctx", "x : bot", "x [bot]", "x"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn free_theorem_of_bottom_matches_golden() {
    let o = run(&["free-theorem", "forall X. X"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("free_theorem_bottom.txt"));
}

#[test]
fn free_theorem_graph_instance_is_confirmed() {
    let o = run(&["free-theorem", "forall X. X", "--graph", "Abort[a]"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().last().unwrap().ends_with("[confirmed]"));
}

#[test]
fn uncps_then_cps_reproduces_the_canonical_form() {
    for term in ["C[s]", "L-mu[a]", "Peirce[a] [b]", "g_s[s]"] {
        let first = run(&["cps", term]);
        assert_eq!(first.status.code(), Some(0));
        let canonical = stdout(&first);
        let inverted = run(&["uncps", canonical.trim_end()]);
        assert_eq!(inverted.status.code(), Some(0), "{}", String::from_utf8_lossy(&inverted.stderr));
        let again = run(&["cps", stdout(&inverted).trim_end()]);
        assert_eq!(stdout(&again), canonical, "{term}");
    }
}

#[test]
fn cps_of_double_negation_matches_golden_up_to_names() {
    let o = run(&["--mode", "plain", "cps", "C[X]"]);
    let reparsed = |s: &str| mu2forge::parse::parse_target_term(s.trim_end()).unwrap();
    assert_eq!(reparsed(&stdout(&o)), reparsed(&golden("cps_dne.txt")));
}

#[test]
fn focality_outcomes_set_the_exit_code() {
    let o = run(&["focal-check", "\\x:a -> b. x"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("Certified"));
    let o = run(&["focal-check", "\\f:a -> a. f (f n)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("NoCertificate"));
}

#[test]
fn input_errors_exit_two_with_a_position() {
    let o = run(&["typecheck", "\\x:s.\n  (x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:5:"));
    let o = run(&["focal-check", "M"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_export_is_a_tagged_tree() {
    let o = run(&["--json", "typecheck", "\\x:s. x"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["term"]["Lam"][0], "x");
    let t: mu2forge::mu::MuType = serde_json::from_value(v["ty"].clone()).unwrap();
    assert_eq!(t.to_string(), "s → s");
    let o = run(&["--json", "free-theorem", "forall X. X"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["node"], "ForallTerm");
}

#[test]
fn catalog_lists_every_combinator() {
    let o = run(&["catalog"]);
    assert_eq!(stdout(&o).lines().count(), mu2forge::encodings::CATALOG.len());
}

#[test]
fn suite_runs_single_criteria_deterministically() {
    let a = run(&["suite", "--criterion", "6", "--seed", "7"]);
    let b = run(&["suite", "--criterion", "6", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(run(&["suite", "--criterion", "99"]).status.code(), Some(2));
}

#[test]
fn golden_dir_flag_is_honoured() {
    let empty = std::env::temp_dir().join("mu2forge-no-goldens");
    std::fs::create_dir_all(&empty).unwrap();
    let o = run(&["suite", "--criterion", "12", "--golden-dir", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL 12"));
}
