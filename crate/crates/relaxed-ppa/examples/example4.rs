//! Reproduces the three concrete anchored schedule instances: each run
//! converges strongly to the projection of its anchor onto the zero set.
//!
//! Run with `cargo run --release --example example4`.

use relaxed_ppa::harness::{builtin_suite, run_suite};

fn main() {
    let specs = builtin_suite("example-4").unwrap();
    let report = run_suite(&specs, specs.len(), None).unwrap();
    for exp in &report.experiments {
        println!("[{}] {}", if exp.pass { "PASS" } else { "FAIL" }, exp.id);
        for r in &exp.results {
            println!(
                "    {:<32} measured {: >12.4e}   expected {} {:.1e}",
                r.diagnostic, r.measured, r.cmp, r.expected
            );
        }
    }
    println!(
        "\nsuite {} in {:.2}s",
        if report.all_pass { "PASS" } else { "FAIL" },
        report.wall_secs
    );
}
