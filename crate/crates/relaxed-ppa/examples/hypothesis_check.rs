//! Classifies the seven literature presets against the theorem condition
//! bundles and prints the verdict table.
//!
//! The representative parameter choices match the built-in classification
//! table (see `docs/preset-classification.md`): harmonic anchor weights
//! `1/(k+2)` where a rate is needed, constant stepsize `c ≡ 1`, and error
//! magnitudes `1/(k+2)²` (summable) except for the normalized-error preset,
//! which uses `1/(k+1)` (bounded, vanishing).
//!
//! Run with `cargo run --example hypothesis_check`.

use relaxed_ppa::rules::Rule;
use relaxed_ppa::schedules::{check_hypotheses, ErrorModel, ParameterSchedule, Preset, TheoremId};
use relaxed_ppa::Vector;

fn rule(s: &str) -> Rule {
    Rule::parse(s).unwrap()
}

fn representative(preset: &Preset) -> ParameterSchedule {
    let anchor = Vector::from_column_slice(&[3.0, 0.0]);
    let x0 = Vector::from_column_slice(&[0.0, -5.0]);
    let dir = Vector::from_column_slice(&[1.0, 1.0]);
    let errors = match preset {
        // vanishing but only slowly decaying errors for the normalized bundle
        Preset::YaoShahzad { .. } => {
            ErrorModel::deterministic(rule("1/(k+1)"), dir, false).unwrap()
        }
        Preset::CormanYuan { .. } => ErrorModel::Zero,
        _ => ErrorModel::deterministic(rule("1/(k+2)^2"), dir, false).unwrap(),
    };
    preset
        .build(Rule::constant(1.0), errors, anchor, x0)
        .unwrap()
}

fn main() {
    let presets = vec![
        Preset::Rockafellar,
        Preset::EcksteinBertsekas {
            gamma: Rule::constant(1.5),
        },
        Preset::CormanYuan { gamma: 2.5 },
        Preset::XuModified {
            alpha: rule("1/(k+2)"),
        },
        Preset::MarinoXu {
            alpha: rule("1/(k+2)"),
        },
        Preset::YaoNoor {
            alpha: rule("1/(k+2)"),
            beta: rule("1/4"),
        },
        Preset::YaoShahzad {
            beta: rule("(k+1)/(2(k+2))"),
            gamma: rule("(k+1)/(2(k+2))"),
        },
    ];

    println!(
        "{:<20} {:>22} {:>22} {:>18} {:>18} {:>28}",
        "preset",
        "boundedness-summable",
        "boundedness-families",
        "weak-convergence",
        "strong-convergence",
        "strong-convergence-normalized"
    );
    for preset in &presets {
        let schedule = representative(preset);
        let report = check_hypotheses(&schedule, 10_000);
        let cell = |t: TheoremId| report.get(t).verdict.to_string();
        println!(
            "{:<20} {:>22} {:>22} {:>18} {:>18} {:>28}",
            preset.name(),
            cell(TheoremId::BoundednessSummable),
            cell(TheoremId::BoundednessFamilies),
            cell(TheoremId::WeakConvergence),
            cell(TheoremId::StrongConvergence),
            cell(TheoremId::StrongConvergenceNormalized),
        );
    }

    println!("\nwitness detail for the over-relaxed fixed-coefficient preset:");
    let cy = representative(&Preset::CormanYuan { gamma: 2.5 });
    let report = check_hypotheses(&cy, 100);
    for ev in &report.get(TheoremId::WeakConvergence).evidence {
        if ev.verdict.fails() && ev.condition.contains("β+γ/2") {
            println!("  {} -> {} ({})", ev.condition, ev.verdict, ev.detail);
        }
    }
}
