//! Runs all twelve acceptance criteria at their stated tolerances and prints
//! one PASS/FAIL line for each.
//!
//! Criteria 3, 4, 7 and 10 cannot be met under the fixed sign conventions.
//! They are reported as FAIL; `failure_modes.rs` pins the exact way in which
//! they fail. The run exits nonzero if the failing set changes in either direction.

use nambu::acceptance::run_all;
use std::collections::BTreeSet;
use std::process::ExitCode;

const SEED: u64 = 0;
const KNOWN_UNATTAINABLE: [u8; 4] = [3, 4, 7, 10];

fn main() -> ExitCode {
    let results = match run_all(SEED) {
        Ok(r) => r,
        Err(e) => {
            println!("acceptance run failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    let mut failing = BTreeSet::new();
    for r in &results {
        println!("{}", r.summary_line());
        for c in &r.checks {
            println!("    [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
        }
        if !r.passed {
            failing.insert(r.id);
        }
    }
    let expected: BTreeSet<u8> = KNOWN_UNATTAINABLE.into_iter().collect();
    let passing = results.iter().filter(|r| r.passed).count();
    println!("{passing}/12 criteria pass; failing {failing:?}, known unattainable {expected:?}");
    if failing == expected {
        ExitCode::SUCCESS
    } else {
        println!("failing set changed");
        ExitCode::FAILURE
    }
}
