//! Runs every acceptance criterion and prints one PASS/FAIL line for each.

use std::process::ExitCode;

use cobordia::acceptance::run_all;

fn main() -> ExitCode {
    let verbose = std::env::args().any(|a| a == "--nocapture" || a == "-v");
    let reports = run_all();
    for r in &reports {
        println!("{}", r.line());
        if verbose || !r.passed {
            for d in &r.details {
                println!("    {d}");
            }
        }
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    if failed.is_empty() {
        println!("acceptance: {} of {} criteria passed", reports.len(), reports.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
