//! Runs without the libtest harness so the per-criterion lines always show.

use std::process::ExitCode;

use rfk_core::selftest::{run, DEFAULT_SEED};

fn main() -> ExitCode {
    let report = run(DEFAULT_SEED);
    for c in &report.criteria {
        println!("criterion {:>2}: {} ({}) {}", c.id, if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let failed: Vec<u8> = report.criteria.iter().filter(|c| !c.pass).map(|c| c.id).collect();
    if report.criteria.len() == 10 && failed.is_empty() {
        println!("acceptance: 10/10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
