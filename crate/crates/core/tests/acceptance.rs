use std::process::ExitCode;
use std::time::Instant;

use bergman_core::suite::{all_criteria, run_criterion};
use bergman_core::Config;

fn main() -> ExitCode {
    let verbose = std::env::args().any(|a| a == "--verbose" || a == "-v");
    let cfg = Config::default();
    let mut failed = 0;
    for id in all_criteria() {
        let start = Instant::now();
        let o = run_criterion(id, &cfg);
        let secs = start.elapsed().as_secs_f64();
        println!(
            "{} {:>2}  {}: {} [{secs:.1}s]",
            if o.passed { "PASS" } else { "FAIL" },
            o.id,
            o.title,
            o.summary
        );
        if verbose || !o.passed {
            for d in &o.details {
                println!("        {d}");
            }
        }
        if !o.passed {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", all_criteria().len() - failed, all_criteria().len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
