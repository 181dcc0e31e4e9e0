//! Runs the nine acceptance criteria and prints one line per criterion.
//!
//! Set `GENKEPLER_QUICK=1` for the reduced sweep.

use std::process::ExitCode;

use genkepler::verify::run_all;

fn main() -> ExitCode {
    let quick = std::env::var_os("GENKEPLER_QUICK").is_some_and(|v| v != "0");
    let results = run_all(quick);
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed{}",
        results.len() - failed,
        if quick { " (quick sweep)" } else { "" }
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
