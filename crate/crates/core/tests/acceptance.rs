//! Prints one PASS/FAIL line per acceptance criterion. A failure that is a
//! known defect of the criterion itself is printed but does not fail the run.

use mu2forge::suite::{run, SuiteConfig};

#[test]
fn acceptance() {
    let mut unexpected = Vec::new();
    for result in run(&SuiteConfig::default()) {
        println!("{result}");
        if !result.passed && !result.known_defect {
            unexpected.push(result.index);
        }
    }
    assert!(unexpected.is_empty(), "unexpected failures in criteria {unexpected:?}");
}
