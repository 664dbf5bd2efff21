//! Command-line front end: run one experiment, run a suite, check a
//! schedule against the theorem condition bundles, or list presets.
//!
//! Exit codes: 0 on full pass, 1 when any expectation fails, 2 on config or
//! usage errors. Diagnostics go to standard error; data goes to files (and
//! `check` verdicts, which are data, to standard output).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use relaxed_ppa::config::{self, ErrorCfg};
use relaxed_ppa::engine::{self, RunVerdict};
use relaxed_ppa::harness::{
    self, Comparator, Diagnostic, Expectation, ExperimentKind, ExperimentSpec, Provenance,
};
use relaxed_ppa::schedules::{check_hypotheses_filtered, TheoremId, DEFAULT_HORIZON, PRESET_NAMES};
use relaxed_ppa::Error;

#[derive(Parser)]
#[command(
    name = "relaxed-ppa",
    about = "Relaxed proximal point iterations: experiments, suites, and schedule checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single experiment config and export its trace.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory for the trace CSV and the run summary.
        #[arg(long)]
        out: PathBuf,
        /// Override the random error seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the iteration budget.
        #[arg(long)]
        max_iters: Option<u64>,
    },
    /// Run a built-in suite by name, or a suite file.
    Suite {
        /// Built-in suite name (see `presets`).
        #[arg(long, conflicts_with = "config")]
        name: Option<String>,
        /// Suite description file.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Concurrent experiments (defaults to the suite size).
        #[arg(long)]
        parallelism: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Classify a config's schedule against the theorem condition bundles.
    Check {
        #[arg(long)]
        config: PathBuf,
        /// Pointwise-check horizon.
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: u64,
        /// Restrict to one theorem id.
        #[arg(long)]
        theorem: Option<String>,
    },
    /// List available presets, suites, and theorem ids.
    Presets,
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch() -> Result<bool, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            seed,
            max_iters,
        } => cmd_run(&config, &out, seed, max_iters),
        Command::Suite {
            name,
            config,
            out,
            parallelism,
            seed,
        } => cmd_suite(name.as_deref(), config.as_deref(), &out, parallelism, seed),
        Command::Check {
            config,
            horizon,
            theorem,
        } => cmd_check(&config, horizon, theorem.as_deref()),
        Command::Presets => {
            println!("presets:");
            for p in PRESET_NAMES {
                println!("  {p}");
            }
            println!("suites:");
            for s in harness::SUITE_NAMES {
                println!("  {s}");
            }
            println!("theorems:");
            for t in TheoremId::ALL {
                println!("  {t}");
            }
            Ok(true)
        }
    }
}

fn load_config(
    path: &Path,
    seed: Option<u64>,
    max_iters: Option<u64>,
) -> Result<
    (
        relaxed_ppa::operators::OperatorSpec,
        relaxed_ppa::schedules::ParameterSchedule,
        engine::RunConfig,
    ),
    Error,
> {
    let text = std::fs::read_to_string(path)?;
    let mut doc = config::parse_doc(&text)?;
    if let Some(seed) = seed {
        if let ErrorCfg::Random { seed: s, .. } = &mut doc.schedule.error {
            *s = seed;
        }
    }
    if let Some(m) = max_iters {
        doc.run.max_iters = m;
    }
    config::build(&doc)
}

fn cmd_run(
    path: &Path,
    out: &Path,
    seed: Option<u64>,
    max_iters: Option<u64>,
) -> Result<bool, Error> {
    let (operator, schedule, run) = load_config(path, seed, max_iters)?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into());
    let (trace, outcome) = engine::iterate(&operator, &schedule, &run)?;
    std::fs::create_dir_all(out)?;
    let csv_path = out.join(format!("{stem}.csv"));
    let file = std::fs::File::create(&csv_path)?;
    engine::write_csv(&trace, std::io::BufWriter::new(file))?;

    let mut summary = String::new();
    summary.push_str(&format!(
        "verdict = \"{}\"\n",
        verdict_name(&outcome.verdict)
    ));
    summary.push_str(&format!("iterations = {}\n", outcome.iterations));
    summary.push_str(&format!(
        "final_residual = {:.16e}\n",
        outcome.summary.final_residual
    ));
    summary.push_str(&format!(
        "max_x_norm = {:.16e}\n",
        outcome.summary.max_x_norm
    ));
    if let Some(d) = outcome.summary.final_dist {
        summary.push_str(&format!("final_dist = {d:.16e}\n"));
    }
    if let Some(s) = trace.max_fejer_rel_slack {
        summary.push_str(&format!("max_fejer_rel_slack = {s:.16e}\n"));
    }
    std::fs::write(out.join(format!("{stem}-summary.toml")), summary)?;
    eprintln!(
        "wrote {} ({} recorded rows) and {stem}-summary.toml",
        csv_path.display(),
        trace.rows.len()
    );
    Ok(true)
}

fn verdict_name(v: &RunVerdict) -> String {
    match v {
        RunVerdict::Converged => "converged".into(),
        RunVerdict::ResidualConverged => "residual-converged".into(),
        RunVerdict::Diverged { at } => format!("diverged at k={at}"),
        RunVerdict::BudgetExhausted => "budget-exhausted".into(),
    }
}

fn cmd_suite(
    name: Option<&str>,
    config: Option<&Path>,
    out: &Path,
    parallelism: Option<usize>,
    seed: Option<u64>,
) -> Result<bool, Error> {
    let specs = match (name, config) {
        (Some(n), None) => harness::builtin_suite(n)?,
        (None, Some(path)) => load_suite_file(path, seed)?,
        _ => {
            return Err(Error::InvalidParameter(
                "pass exactly one of --name or --config".into(),
            ))
        }
    };
    let parallelism = parallelism.unwrap_or_else(|| {
        specs
            .len()
            .min(std::thread::available_parallelism().map_or(1, |n| n.get()))
    });
    let report = harness::run_suite(&specs, parallelism, Some(out))?;
    for exp in &report.experiments {
        eprintln!(
            "[{}] {} ({:.2}s)",
            if exp.pass { "PASS" } else { "FAIL" },
            exp.id,
            exp.wall_secs
        );
    }
    eprintln!(
        "suite {}: report in {}",
        if report.all_pass { "PASS" } else { "FAIL" },
        out.display()
    );
    Ok(report.all_pass)
}

/// Suite files list experiment configs with optional expectations:
///
/// ```toml
/// version = 1
/// [[experiments]]
/// id = "my-run"
/// config = "experiment.toml"
/// [[experiments.expect]]
/// diagnostic = "final_dist"    # tail_max_residual | max_fejer_rel_slack | ...
/// cmp = "<="
/// value = 1e-3
/// tol = 0.0
/// ```
fn load_suite_file(path: &Path, seed: Option<u64>) -> Result<Vec<ExperimentSpec>, Error> {
    #[derive(serde::Deserialize)]
    struct SuiteFile {
        version: u32,
        #[serde(default)]
        experiments: Vec<SuiteEntry>,
    }
    #[derive(serde::Deserialize)]
    struct SuiteEntry {
        id: String,
        config: PathBuf,
        #[serde(default)]
        expect: Vec<ExpectEntry>,
    }
    #[derive(serde::Deserialize)]
    struct ExpectEntry {
        diagnostic: String,
        #[serde(default)]
        cmp: Option<String>,
        value: f64,
        #[serde(default)]
        tol: f64,
        #[serde(default)]
        param: Option<f64>,
    }

    let text = std::fs::read_to_string(path)?;
    let file: SuiteFile = toml::from_str(&text).map_err(|e| Error::Config {
        field: "<suite>".into(),
        msg: e.message().to_string(),
    })?;
    if file.version != config::CONFIG_VERSION {
        return Err(Error::Config {
            field: "version".into(),
            msg: format!("unsupported suite version {}", file.version),
        });
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let mut specs = Vec::new();
    for entry in file.experiments {
        let cfg_path = if entry.config.is_relative() {
            base.join(&entry.config)
        } else {
            entry.config.clone()
        };
        let (operator, schedule, run) = load_config(&cfg_path, seed, None)?;
        let mut expected = Vec::new();
        for e in entry.expect {
            let diagnostic = parse_diagnostic(&e.diagnostic, e.param)?;
            let cmp = match e.cmp.as_deref() {
                None | Some("<=") => Comparator::LessEq,
                Some("==") => Comparator::Within,
                Some(other) => {
                    return Err(Error::Config {
                        field: "expect.cmp".into(),
                        msg: format!("unknown comparator `{other}`"),
                    })
                }
            };
            expected.push(Expectation {
                diagnostic,
                cmp,
                value: e.value,
                tol: e.tol,
                provenance: Provenance::Derived,
            });
        }
        specs.push(ExperimentSpec {
            id: entry.id,
            kind: ExperimentKind::Iterate {
                operator,
                schedule,
                run,
            },
            expected,
            notes: format!("from {}", cfg_path.display()),
        });
    }
    Ok(specs)
}

fn parse_diagnostic(name: &str, param: Option<f64>) -> Result<Diagnostic, Error> {
    Ok(match name {
        "final_dist" => Diagnostic::FinalDist,
        "tail_max_residual" => Diagnostic::TailMaxResidual,
        "quarter_window_dist_increase" => Diagnostic::QuarterWindowDistMaxIncrease,
        "max_pairwise_dist_last" => {
            Diagnostic::MaxPairwiseDistLastRecorded(param.unwrap_or(100.0) as usize)
        }
        "residual_at_final" => Diagnostic::ResidualAtFinal {
            c: param.unwrap_or(1.0),
        },
        "max_norm_linear_deviation" => Diagnostic::MaxNormLinearDeviation {
            slope: param.unwrap_or(1.0),
        },
        "sup_dist_excess_over_initial" => Diagnostic::SupDistExcessOverInitial,
        "max_fejer_rel_slack" => Diagnostic::MaxFejerRelSlack,
        "max_step_rel_slack" => Diagnostic::MaxStepRelSlack,
        "unbounded_verdict" => Diagnostic::UnboundedVerdict {
            threshold: param.unwrap_or(1e3),
        },
        "bounded_verdict" => Diagnostic::BoundedVerdict {
            threshold: param.unwrap_or(1e3),
        },
        "anchor_tail_max" => Diagnostic::AnchorTailMax,
        "dist_tail_oscillation" => Diagnostic::DistTailOscillation,
        other => {
            return Err(Error::UnknownName {
                kind: "diagnostic",
                name: other.to_string(),
            })
        }
    })
}

fn cmd_check(path: &Path, horizon: u64, theorem: Option<&str>) -> Result<bool, Error> {
    let (_, schedule, _) = load_config(path, None, None)?;
    let theorems: Vec<TheoremId> = match theorem {
        Some(t) => vec![TheoremId::parse(t)?],
        None => TheoremId::ALL.to_vec(),
    };
    let report = check_hypotheses_filtered(&schedule, horizon, &theorems);
    for entry in &report.entries {
        println!("{}: {}", entry.theorem, entry.verdict);
        for ev in &entry.evidence {
            println!(
                "    [{}] {} ({:?}: {})",
                ev.verdict, ev.condition, ev.tag, ev.detail
            );
        }
    }
    // Verdicts are data, not process failures.
    Ok(true)
}
