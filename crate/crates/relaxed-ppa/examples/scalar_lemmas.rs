//! The scalar comparison lemmas as executable recurrences: decay of the
//! averaged recursion, the contraction bound, and the product-sum
//! inequality in its telescoping equality case.
//!
//! Run with `cargo run --release --example scalar_lemmas`.

use relaxed_ppa::rules::Rule;
use relaxed_ppa::sequences::{
    alphabeta_partial_check, norm_sum_inequalities, tkleq_majorant, xu_recurrence, MajorantPart,
};
use relaxed_ppa::Vector;

fn main() {
    let rule = |s: &str| Rule::parse(s).unwrap();

    // averaged recursion s_{k+1} = (1−a_k)s_k + a_k b_k + ε_k with harmonic
    // weights and summable perturbations decays to zero
    let (values, flags) = xu_recurrence(
        1.0,
        &rule("1/(k+2)"),
        &rule("0"),
        &rule("1/(k+2)^2"),
        100_000,
    )
    .unwrap();
    assert!(flags.is_empty());
    println!("averaged recursion, harmonic weights:");
    for k in [0usize, 10, 100, 1000, 10_000, 100_000] {
        println!("  s_{k:<6} = {:.6e}", values[k]);
    }

    // contraction majorant stays below t0 + (1−α̂)^{-1} max(M, 0)
    let report = tkleq_majorant(
        5.0,
        &Rule::constant(0.5),
        &rule("1"),
        &rule("1"),
        &rule("0"),
        MajorantPart::BoundedContraction,
        1000,
    )
    .unwrap();
    println!(
        "\ncontraction majorant (α ≡ 0.5, βω+γ ≡ 1): verdict {:?}",
        report.verdict
    );
    println!(
        "  sup t_k = {:.6}",
        report.values.iter().cloned().fold(f64::MIN, f64::max)
    );

    // the product-sum inequality telescopes to equality when β = 1 − α
    let (lhs, rhs) = alphabeta_partial_check(&rule("k/(k+2)"), &rule("2/(k+2)"), 3, 7).unwrap();
    println!("\nproduct-sum inequality at the equality case: lhs = {lhs:.12}, rhs = {rhs:.12}");

    // the norm expansion inequalities
    let x = Vector::from_column_slice(&[1.0, 0.0]);
    let y = Vector::from_column_slice(&[0.0, 1.0]);
    println!("\nnorm expansion bounds for x = (1,0), y = (0,1):");
    for (i, (l, r)) in norm_sum_inequalities(&x, &y)
        .unwrap()
        .into_iter()
        .enumerate()
    {
        println!("  form {}: {l:.4} ≤ {r:.4}", i + 1);
    }
}
