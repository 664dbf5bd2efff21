//! End-to-end checks of the command-line interface and its exit-code
//! contract: 0 on full pass, 1 on expectation failure, 2 on config errors.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_relaxed-ppa"))
}

fn config_path(name: &str) -> String {
    format!("{}/configs/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn run_writes_trace_and_summary() {
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .args([
            "run",
            "--config",
            &config_path("ex4-1-box.toml"),
            "--out",
            out.path().to_str().unwrap(),
            "--max-iters",
            "2000",
        ])
        .output()
        .unwrap();
    assert!(status.status.success(), "{status:?}");
    let csv = out.path().join("ex4-1-box.csv");
    assert!(csv.exists());
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with(
        "k,alpha,beta,gamma,delta,c,residual,step_norm,dist_to_proj,anchor_ip,x_norm"
    ));
    assert!(out.path().join("ex4-1-box-summary.toml").exists());
}

#[test]
fn check_prints_witness_and_exits_zero() {
    let output = bin()
        .args([
            "check",
            "--config",
            &config_path("corman-yuan-2.5.toml"),
            "--theorem",
            "weak-convergence",
        ])
        .output()
        .unwrap();
    assert!(output.status.success(), "verdicts are data, not errors");
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(
        stdout.contains("fails(witness k=0)"),
        "expected the pointwise witness in:\n{stdout}"
    );
}

#[test]
fn config_errors_exit_two() {
    let out = tempfile::tempdir().unwrap();
    // missing file
    let status = bin()
        .args([
            "run",
            "--config",
            "/nonexistent.toml",
            "--out",
            out.path().to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    // malformed content
    let bad = out.path().join("bad.toml");
    std::fs::write(&bad, "version = 1\n[operator\n").unwrap();
    let status = bin()
        .args([
            "run",
            "--config",
            bad.to_str().unwrap(),
            "--out",
            out.path().to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    // empty file
    let empty = out.path().join("empty.toml");
    std::fs::write(&empty, "").unwrap();
    let output = bin()
        .args([
            "run",
            "--config",
            empty.to_str().unwrap(),
            "--out",
            out.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("line 1, column 1"), "{stderr}");
}

#[test]
fn suite_failure_exits_one() {
    let out = tempfile::tempdir().unwrap();
    // a suite whose expectation cannot hold: the constant-operator walk has
    // residual ‖cv‖ = 1 forever
    let exp_cfg = out.path().join("diverging.toml");
    std::fs::write(
        &exp_cfg,
        r#"
version = 1
[operator]
kind = "constant"
value = [1.0, 0.0]
[schedule]
alpha = "0"
beta = "0"
gamma = "1"
delta = "1"
c = "1"
anchor = [0.0, 0.0]
x0 = [0.0, 0.0]
[run]
max_iters = 100
"#,
    )
    .unwrap();
    let suite = out.path().join("suite.toml");
    std::fs::write(
        &suite,
        r#"
version = 1
[[experiments]]
id = "impossible"
config = "diverging.toml"
[[experiments.expect]]
diagnostic = "tail_max_residual"
value = 1e-9
"#,
    )
    .unwrap();
    let status = bin()
        .args([
            "suite",
            "--config",
            suite.to_str().unwrap(),
            "--out",
            out.path().join("results").to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    // the report still landed
    assert!(out.path().join("results/report.toml").exists());
}

#[test]
fn builtin_suite_via_cli_passes_and_reports_match() {
    let out_a = tempfile::tempdir().unwrap();
    let out_b = tempfile::tempdir().unwrap();
    for out in [&out_a, &out_b] {
        let status = bin()
            .args([
                "suite",
                "--name",
                "boundedness-iff",
                "--out",
                out.path().to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
    }
    // identical outputs modulo the single timestamped header line
    let strip = |p: &Path| {
        let text = std::fs::read_to_string(p.join("report.txt")).unwrap();
        text.lines().skip(1).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(strip(out_a.path()), strip(out_b.path()));
    let toml_a = std::fs::read(out_a.path().join("report.toml")).unwrap();
    let toml_b = std::fs::read(out_b.path().join("report.toml")).unwrap();
    assert_eq!(toml_a, toml_b);
    for name in [
        "bnd-empty-zeros-diverges.csv",
        "bnd-nonempty-zeros-bounded.csv",
    ] {
        let a = std::fs::read(out_a.path().join(name)).unwrap();
        let b = std::fs::read(out_b.path().join(name)).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn presets_lists_names() {
    let output = bin().arg("presets").output().unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    for name in [
        "rockafellar",
        "yao_shahzad",
        "example-4",
        "strong-convergence-normalized",
    ] {
        assert!(stdout.contains(name), "missing {name} in:\n{stdout}");
    }
}
