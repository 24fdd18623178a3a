//! Runs every acceptance criterion and prints one line per criterion.

use lexperm_selftest::{run_all, CRITERIA};

#[test]
fn acceptance() {
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let outcomes = run_all(jobs);
    assert_eq!(outcomes.len(), CRITERIA.len());
    for o in &outcomes {
        println!("{o}");
    }
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| format!("C{}", o.id))
        .collect();
    assert!(failed.is_empty(), "failed criteria: {}", failed.join(", "));
}
