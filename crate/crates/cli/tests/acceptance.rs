//! One line per acceptance criterion, then the negative controls.
//! Exits nonzero if anything is off.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ordzeta::finmod::Budget;
use ordzeta::orders::EnumOptions;
use ordzeta_cli::status::{ErrorKind, Status};
use ordzeta_cli::verify::{run_criterion, verify_all, Mutation, VerifyOptions};

const LIMIT: Duration = Duration::from_secs(120);

fn main() -> ExitCode {
    let mut ok = true;
    let opts = VerifyOptions::default();
    let mut last = Instant::now();
    let results = verify_all(&opts, |r| {
        let took = last.elapsed();
        let slow = if took > LIMIT { "  TOO SLOW" } else { "" };
        println!("{}  [{:.1?}]{slow}", r.line(), took);
        if !r.checks.iter().all(|c| c.pass) {
            for c in r.checks.iter().filter(|c| !c.pass) {
                println!("    failed: {} {}", c.name, c.detail.as_deref().unwrap_or(""));
            }
        }
        ok &= took <= LIMIT;
        last = Instant::now();
    });
    let passed = results.iter().filter(|r| r.status == Status::Pass).count();
    ok &= passed == 15;
    println!("{passed} of 15 criteria pass");

    // a corrupted zeta coefficient must be caught
    let mutated = run_criterion(&VerifyOptions { mutation: Some(Mutation::ZetaCoefficient), ..opts.clone() }, 1);
    let caught = mutated.status == Status::Fail;
    println!("control  mutated zeta coefficient fails criterion 1  {}", if caught { "PASS" } else { "FAIL" });
    ok &= caught;

    // zero budgets are resource failures, never mathematical ones
    let starved = VerifyOptions {
        budget: Budget { exhaustive: 0, samples: 0, seed: 0 },
        enum_opts: EnumOptions { move_cap: 0, class_cap: 0, shuffle: None },
        mutation: None,
        only: Some(vec![2, 10, 13]),
    };
    let rs = verify_all(&starved, |_| {});
    let resource = rs.iter().all(|r| {
        r.status == Status::Error
            && r.error.as_ref().is_some_and(|e| e.kind == ErrorKind::Resource && e.exit_code() == 2)
    });
    for r in &rs {
        println!("    starved: {}", r.line());
    }
    println!("control  zero budgets give resource errors  {}", if resource { "PASS" } else { "FAIL" });
    ok &= resource;

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
