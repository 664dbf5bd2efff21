//! Prints the coefficient tables of the seven literature presets for the
//! first few iterations.
//!
//! Run with `cargo run --example schedule_presets`.

use relaxed_ppa::rules::Rule;
use relaxed_ppa::schedules::{ErrorModel, Preset};
use relaxed_ppa::Vector;

fn main() {
    let rule = |s: &str| Rule::parse(s).unwrap();
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
    let anchor = Vector::from_column_slice(&[3.0, 0.0]);
    let x0 = Vector::from_column_slice(&[0.0, -5.0]);
    for preset in presets {
        let schedule = preset
            .build(
                Rule::constant(1.0),
                ErrorModel::Zero,
                anchor.clone(),
                x0.clone(),
            )
            .unwrap();
        println!(
            "{} (anchor {:?}):",
            preset.name(),
            schedule.anchor.as_slice()
        );
        println!(
            "  {:>4} {:>10} {:>10} {:>10} {:>10}",
            "k", "alpha", "beta", "gamma", "delta"
        );
        for k in [0u64, 1, 2, 5, 100] {
            let c = schedule.evaluate(k).unwrap();
            println!(
                "  {k:>4} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
                c.alpha, c.beta, c.gamma, c.delta
            );
        }
        println!();
    }
}
