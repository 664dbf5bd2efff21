//! Randomized verification of the resolvent identities across the operator
//! catalogue: firm nonexpansiveness, the stepsize identity, the residual
//! doubling bound, the reflected-resolvent bounds, and agreement of the
//! ball-restricted resolvent with the plain one inside the ball.
//!
//! Run with `cargo run --release --example operator_identities`.

use relaxed_ppa::harness::{run_atilde_batch, run_identity_batch};

fn main() {
    let draws = 1200;
    let batch = run_identity_batch(draws, 0x1de5).unwrap();
    println!("{} randomized draws over dimensions 1, 2, 4, 16:", draws);
    println!(
        "  firm nonexpansiveness    max rel violation: {: >12.3e}",
        batch.max_firm_violation
    );
    println!(
        "  stepsize identity        max rel residual : {: >12.3e}",
        batch.max_scaling_residual
    );
    println!(
        "  residual doubling        max rel violation: {: >12.3e}",
        batch.max_doubling_violation
    );
    println!(
        "  reflected stepsize bound max rel violation: {: >12.3e}",
        batch.max_reflected_step_violation
    );
    println!(
        "  reflected nonexpansive   max rel violation: {: >12.3e}",
        batch.max_reflected_nonexp_violation
    );

    let gap = run_atilde_batch(200, 0xba11).unwrap();
    println!("\n200 ball-restriction draws with the resolvent inside the ball:");
    println!("  max ‖J_(cÃ)x − J_(cA)x‖: {gap:.3e}");
}
