//! Full acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! `GEOENV_ACCEPTANCE_STRICT=1` turns any failure into a nonzero exit;
//! `GEOENV_ACCEPTANCE_PROFILE=quick` runs the reduced sizes;
//! `GEOENV_ACCEPTANCE_REPORT=path` writes the JSON report.

use std::process::ExitCode;
use std::time::Instant;

use geoenv_core::suite::{run_suite, Profile, SuiteConfig};

const SEED: u64 = 1;

fn main() -> ExitCode {
    let profile = match std::env::var("GEOENV_ACCEPTANCE_PROFILE") {
        Ok(p) => match p.parse::<Profile>() {
            Ok(p) => p,
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
        },
        Err(_) => Profile::Full,
    };
    let strict = std::env::var("GEOENV_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let config = SuiteConfig::new(SEED, profile);
    println!("acceptance: profile {profile}, seed {SEED}, {} workers", config.workers);

    let mut clock = Instant::now();
    let report = run_suite(&config, env!("CARGO_PKG_VERSION"), |c| {
        println!("{}\n       [{:.1}s]", c.summary(), clock.elapsed().as_secs_f64());
        clock = Instant::now();
    });
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("acceptance suite could not run: {e}");
            return ExitCode::FAILURE;
        }
    };

    println!("\nsummary");
    for c in &report.criteria {
        println!("{} {:>2} {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.name);
    }
    let failed = report.criteria.iter().filter(|c| !c.pass).count();
    println!("{} of {} criteria passed", report.criteria.len() - failed, report.criteria.len());

    if let Ok(path) = std::env::var("GEOENV_ACCEPTANCE_REPORT") {
        match report.to_json() {
            Ok(json) => {
                if let Err(e) = std::fs::write(&path, json) {
                    eprintln!("writing {path}: {e}");
                }
            }
            Err(e) => eprintln!("serializing report: {e}"),
        }
    }
    if strict && failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
