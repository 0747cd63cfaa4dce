//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run a subset by passing criterion numbers, e.g. `cargo test --test acceptance -- 2 7`.

mod c2_exponent;
mod c4_tree;
mod c5_subclass;
mod c6_rep;
mod c7_reify;
mod c8_fixtures;
mod c9_codec;
mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;
type Suite = (u32, &'static str, fn() -> Outcome);

const LIMIT: Duration = Duration::from_secs(60);

fn main() -> ExitCode {
    let suites: [Suite; 9] = [
        (1, "universal properties", c1_universal::run),
        (2, "exponent consistency", c2_exponent::run),
        (3, "isomorphism laws", c3_iso::run),
        (4, "tree-algebra laws", c4_tree::run),
        (5, "two-pullback subclass theorem", c5_subclass::run),
        (6, "rep equivalences", c6_rep::run),
        (7, "reification correspondence", c7_reify::run),
        (8, "example fixtures", c8_fixtures::run),
        (9, "determinism and codecs", c9_codec::run),
    ];
    let wanted: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = false;
    for (n, title, suite) in suites {
        if !wanted.is_empty() && !wanted.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = suite();
        let secs = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if secs > LIMIT => Err(format!("{detail}; exceeded {}s", LIMIT.as_secs())),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {n} {title}: {detail} [{:.2}s]", secs.as_secs_f64()),
            Err(detail) => {
                failed = true;
                println!("FAIL {n} {title}: {detail} [{:.2}s]", secs.as_secs_f64());
            }
        }
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
