//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runtime caps are pinned in `clusterform::battery`.

use clusterform::battery::{criteria, run_criterion};

fn main() {
    let results: Vec<_> = criteria().iter().map(run_criterion).collect();
    for r in &results {
        println!("{}", r.line());
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
