//! The demo reports, run natively.

use mu2forge_web::{cps_report, eq_report, free_theorem_report};

#[test]
fn cps_report_names_the_category() {
    let r = cps_report("C[s]", "").unwrap();
    assert_eq!(r.ty, "¬¬s → s");
    assert_eq!(r.category, "program");
    assert!(r.canonical.starts_with("λz:"));
}

#[test]
fn eq_report_follows_the_theory() {
    assert!(eq_report("C[s] (\\k. k M)", "M", "", "p").unwrap().equal);
    assert!(!eq_report("x [bot]", "x", "x : bot", "beta-eta").unwrap().equal);
    assert!(eq_report("x [bot]", "x", "x : bot", "p").unwrap().equal);
    assert!(eq_report("M", "M", "", "classical").is_err());
}

#[test]
fn free_theorem_report_matches_the_printer() {
    let r = free_theorem_report("forall X. X").unwrap();
    assert_eq!(r.text, "∀x:⊥. ∀Y1. ∀Z1. ∀focal r1:Y1 ↔ Z1. r1(x [Y1], x [Z1])");
    assert!(free_theorem_report("X").unwrap_err().contains("X"));
}

#[test]
fn syntax_errors_carry_positions() {
    let e = cps_report("\\x:s.\n  (x", "").unwrap_err();
    assert!(e.starts_with("2:5:"), "{e}");
}
