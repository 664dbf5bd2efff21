//! Runs a single experiment from a TOML config and writes the trace CSV.
//!
//! The config anchors the iteration at u = (3,0) over the box normal cone;
//! the strong limit is the projection (1,0). Output lands in
//! `target/example-out/`.
//!
//! Run with `cargo run --release --example run_iteration`.

use relaxed_ppa::{config, engine};

const CONFIG: &str = r#"
version = 1

[operator]
kind = "normal_cone"
set = { kind = "box", lower = [-1.0, -1.0], upper = [1.0, 1.0] }

[schedule]
alpha = "1/(k+3)"
beta = "1/(k+2)"
gamma = "k/(k+2)"
delta = "1"
c = "{0: 1, tail: k}"
anchor = [3.0, 0.0]
x0 = [0.0, -5.0]

[schedule.error]
kind = "deterministic"
magnitude = "1/(k+2)^2"
direction = [1.0, 1.0]

[run]
max_iters = 50000
record_stride = 25
"#;

fn main() {
    let (operator, schedule, run) = config::parse_config(CONFIG).unwrap();
    let (trace, outcome) = engine::iterate(&operator, &schedule, &run).unwrap();

    let out = std::path::Path::new("target/example-out");
    std::fs::create_dir_all(out).unwrap();
    let path = out.join("anchored-box.csv");
    let file = std::fs::File::create(&path).unwrap();
    engine::write_csv(&trace, std::io::BufWriter::new(file)).unwrap();

    println!("iterations: {}", outcome.iterations);
    println!(
        "final x:    ({:.6}, {:.6})",
        outcome.final_x[0], outcome.final_x[1]
    );
    println!(
        "target:     {:?}",
        trace.projected_anchor.as_ref().map(|p| (p[0], p[1]))
    );
    println!("final dist: {:.3e}", outcome.summary.final_dist.unwrap());
    println!(
        "max per-step distance-inequality slack: {:.3e}",
        trace.max_fejer_rel_slack.unwrap()
    );
    println!("trace written to {}", path.display());

    match engine::asymptotic_regularity_verdict(&trace, 1e-6) {
        engine::RegularityVerdict::Holds { tail_max, at } => {
            println!("asymptotic regularity: holds (tail residual max {tail_max:.3e} at k = {at})")
        }
        other => println!("asymptotic regularity: {other:?}"),
    }
}
