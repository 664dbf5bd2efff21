//! The boundedness equivalence, numerically: with an empty zero set the
//! iterates walk out linearly; with a zero available they stay inside the
//! initial distance ball. Same schedule in both runs.
//!
//! Run with `cargo run --release --example boundedness_iff`.

use relaxed_ppa::engine::{boundedness_verdict, iterate, RunConfig};
use relaxed_ppa::harness::builtin_suite;
use relaxed_ppa::harness::ExperimentKind;

fn main() {
    for spec in builtin_suite("boundedness-iff").unwrap() {
        let ExperimentKind::Iterate {
            operator,
            schedule,
            run,
        } = &spec.kind
        else {
            unreachable!("boundedness suite runs iterations");
        };
        let cfg = RunConfig {
            record_stride: 10,
            ..run.clone()
        };
        let (trace, outcome) = iterate(operator, schedule, &cfg).unwrap();
        println!("{}:", spec.id);
        println!("  {}", spec.notes);
        println!(
            "  after {} steps: ‖x_k‖ = {:.4}, verdict {:?}",
            outcome.iterations,
            outcome.final_x.norm(),
            boundedness_verdict(&trace, 1e3),
        );
        for row in trace.rows.iter().step_by(trace.rows.len() / 5) {
            println!("    k = {:>6}: ‖x_k‖ = {:.6}", row.k, row.x_norm);
        }
    }
}
