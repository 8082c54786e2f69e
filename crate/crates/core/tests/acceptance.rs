//! Prints one pass/fail line per acceptance criterion and exits nonzero if
//! any criterion fails. Pass a criterion number or tag to run a subset.

use std::process::ExitCode;

use artin_tate::acceptance::{run, Options};
use artin_tate::budget::Budget;

fn main() -> ExitCode {
    // libtest-style flags (e.g. --nocapture) are ignored
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let opts = Options {
        filter,
        corrupt_oracle: false,
        budget: Budget::from_env(),
    };
    let results = run(&opts);
    for r in &results {
        println!("{}", r.line());
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
