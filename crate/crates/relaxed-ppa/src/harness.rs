//! Named experiment suites: reproducible runs binding operators, schedules,
//! and expected diagnostics.
//!
//! A suite is a list of [`ExperimentSpec`]s. Most experiments execute the
//! iteration through [`crate::engine::iterate`] and compare trace
//! diagnostics against expected values; two batch kinds instead sweep
//! randomized operator draws through the resolvent identities and the scalar
//! comparison lemmas. Failures are captured per expectation and never abort
//! the suite.
//!
//! Built-in suites ([`builtin_suite`]) pin every expected value, tolerance,
//! seed, and iteration budget, so a rerun is bit-for-bit reproducible.

use std::fmt;
use std::path::Path;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::engine::{self, BoundednessVerdict, RunConfig, StopRule, Trace};
use crate::operators::{ConvexSet, ConvexSetSpec, OperatorSpec};
use crate::rules::{Poly, RationalFn, Rule};
use crate::schedules::{ErrorModel, ParameterSchedule, Preset};
use crate::sequences::{
    alphabeta_partial_check, tkleq_majorant, xu_recurrence_decay, MajorantPart,
};
use crate::{Error, Vector};

// ---------------------------------------------------------------------------
// Experiment model
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Provenance {
    Paper,
    Trivial,
    Derived,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Comparator {
    /// measured ≤ value + tol
    LessEq,
    /// |measured − value| ≤ tol
    Within,
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Comparator::LessEq => write!(f, "<="),
            Comparator::Within => write!(f, "=="),
        }
    }
}

/// A measurable quantity of a finished experiment.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    /// `‖x_final − P_{zer A} u‖`.
    FinalDist,
    /// Max residual over the last quarter of recorded rows.
    TailMaxResidual,
    /// Max increase between consecutive quarter-window maxima of
    /// `dist_to_proj` (≤ 0 means the windows decrease monotonically).
    QuarterWindowDistMaxIncrease,
    /// Max pairwise distance among the last `n` recorded iterate vectors.
    MaxPairwiseDistLastRecorded(usize),
    /// `‖J_{cA} z − z‖` at the final iterate `z`.
    ResidualAtFinal {
        c: f64,
    },
    /// Max over recorded rows of `|‖x_k‖ − slope·k| / (1 + slope·k)`.
    MaxNormLinearDeviation {
        slope: f64,
    },
    /// `sup_k ‖x_k − p‖ − ‖x_0 − p‖` over recorded rows (p = projected anchor).
    SupDistExcessOverInitial,
    /// Max relative slack of the per-step distance inequality.
    MaxFejerRelSlack,
    /// Max relative slack of the step-size consistency bound.
    MaxStepRelSlack,
    /// 1.0 iff the boundedness verdict at the threshold is `Unbounded`.
    UnboundedVerdict {
        threshold: f64,
    },
    /// 1.0 iff the boundedness verdict at the threshold is `Bounded`.
    BoundedVerdict {
        threshold: f64,
    },
    /// Max anchor inner product over the final quarter.
    AnchorTailMax,
    /// Oscillation (max − min) of `dist_to_proj` over the final quarter.
    DistTailOscillation,
    // batch diagnostics
    MaxFirmViolation,
    MaxScalingResidual,
    MaxDoublingViolation,
    MaxReflectedStepViolation,
    MaxReflectedNonexpViolation,
    MaxAtildeGap,
    /// Fraction of randomized decay recurrences whose verdict confirmed.
    DecayConfirmedFraction,
    /// Fraction of randomized bounded recurrences whose verdict confirmed.
    BoundedConfirmedFraction,
    /// Max of `lhs − rhs` over randomized product-sum inequality draws.
    AlphaBetaMaxExcess,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::FinalDist => write!(f, "final_dist"),
            Diagnostic::TailMaxResidual => write!(f, "tail_max_residual"),
            Diagnostic::QuarterWindowDistMaxIncrease => write!(f, "quarter_window_dist_increase"),
            Diagnostic::MaxPairwiseDistLastRecorded(n) => write!(f, "max_pairwise_dist_last_{n}"),
            Diagnostic::ResidualAtFinal { c } => write!(f, "residual_at_final_c_{c}"),
            Diagnostic::MaxNormLinearDeviation { slope } => {
                write!(f, "max_norm_linear_deviation_slope_{slope}")
            }
            Diagnostic::SupDistExcessOverInitial => write!(f, "sup_dist_excess_over_initial"),
            Diagnostic::MaxFejerRelSlack => write!(f, "max_fejer_rel_slack"),
            Diagnostic::MaxStepRelSlack => write!(f, "max_step_rel_slack"),
            Diagnostic::UnboundedVerdict { threshold } => {
                write!(f, "unbounded_verdict_at_{threshold}")
            }
            Diagnostic::BoundedVerdict { threshold } => write!(f, "bounded_verdict_at_{threshold}"),
            Diagnostic::AnchorTailMax => write!(f, "anchor_tail_max"),
            Diagnostic::DistTailOscillation => write!(f, "dist_tail_oscillation"),
            Diagnostic::MaxFirmViolation => write!(f, "max_firm_violation"),
            Diagnostic::MaxScalingResidual => write!(f, "max_scaling_residual"),
            Diagnostic::MaxDoublingViolation => write!(f, "max_doubling_violation"),
            Diagnostic::MaxReflectedStepViolation => write!(f, "max_reflected_step_violation"),
            Diagnostic::MaxReflectedNonexpViolation => write!(f, "max_reflected_nonexp_violation"),
            Diagnostic::MaxAtildeGap => write!(f, "max_atilde_gap"),
            Diagnostic::DecayConfirmedFraction => write!(f, "decay_confirmed_fraction"),
            Diagnostic::BoundedConfirmedFraction => write!(f, "bounded_confirmed_fraction"),
            Diagnostic::AlphaBetaMaxExcess => write!(f, "alphabeta_max_excess"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Expectation {
    pub diagnostic: Diagnostic,
    pub cmp: Comparator,
    pub value: f64,
    pub tol: f64,
    pub provenance: Provenance,
}

impl Expectation {
    pub fn le(diagnostic: Diagnostic, value: f64, tol: f64, provenance: Provenance) -> Self {
        Expectation {
            diagnostic,
            cmp: Comparator::LessEq,
            value,
            tol,
            provenance,
        }
    }

    pub fn within(diagnostic: Diagnostic, value: f64, tol: f64, provenance: Provenance) -> Self {
        Expectation {
            diagnostic,
            cmp: Comparator::Within,
            value,
            tol,
            provenance,
        }
    }

    fn pass(&self, measured: f64) -> bool {
        if !measured.is_finite() {
            return false;
        }
        match self.cmp {
            Comparator::LessEq => measured <= self.value + self.tol,
            Comparator::Within => (measured - self.value).abs() <= self.tol,
        }
    }
}

#[derive(Debug, Clone)]
pub enum ExperimentKind {
    Iterate {
        operator: OperatorSpec,
        schedule: ParameterSchedule,
        run: RunConfig,
    },
    /// Randomized resolvent-identity sweep over the whole catalogue.
    OperatorIdentities { draws: usize, seed: u64 },
    /// Randomized agreement check of `J_{cÃ}` with `J_{cA}` inside the ball.
    AtildeAgreement { draws: usize, seed: u64 },
    /// Randomized scalar-lemma recurrences and the product-sum inequality.
    ScalarLemmas { seed: u64 },
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub id: String,
    pub kind: ExperimentKind,
    pub expected: Vec<Expectation>,
    pub notes: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpectationResult {
    pub diagnostic: String,
    pub cmp: String,
    pub expected: f64,
    pub tolerance: f64,
    pub measured: f64,
    pub pass: bool,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub id: String,
    pub pass: bool,
    pub error: Option<String>,
    pub results: Vec<ExpectationResult>,
    #[serde(skip)]
    pub wall_secs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub all_pass: bool,
    pub experiments: Vec<ExperimentReport>,
    #[serde(skip)]
    pub wall_secs: f64,
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

/// Run every experiment (concurrently up to `parallelism`) and aggregate in
/// spec order. When `out_dir` is given, iterate-experiments write their trace
/// CSV there and the suite writes `report.txt` and `report.toml`.
pub fn run_suite(
    specs: &[ExperimentSpec],
    parallelism: usize,
    out_dir: Option<&Path>,
) -> Result<SuiteReport, Error> {
    let started = Instant::now();
    let parallelism = parallelism.max(1).min(specs.len().max(1));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let reports: Vec<ExperimentReport> = pool.install(|| {
        use rayon::prelude::*;
        specs
            .par_iter()
            .map(|s| run_experiment(s, out_dir))
            .collect()
    });
    let report = SuiteReport {
        all_pass: reports.iter().all(|r| r.pass),
        experiments: reports,
        wall_secs: started.elapsed().as_secs_f64(),
    };
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.txt"), render_text_report(&report))?;
        std::fs::write(
            dir.join("report.toml"),
            toml::to_string_pretty(&report)
                .map_err(|e| Error::InvalidParameter(format!("report serialization: {e}")))?,
        )?;
    }
    Ok(report)
}

fn run_experiment(spec: &ExperimentSpec, out_dir: Option<&Path>) -> ExperimentReport {
    let started = Instant::now();
    let measured = match measure(spec, out_dir) {
        Ok(m) => m,
        Err(e) => {
            return ExperimentReport {
                id: spec.id.clone(),
                pass: false,
                error: Some(e.to_string()),
                results: Vec::new(),
                wall_secs: started.elapsed().as_secs_f64(),
            }
        }
    };
    let results: Vec<ExpectationResult> = spec
        .expected
        .iter()
        .map(|e| {
            let m = measured
                .iter()
                .find(|(d, _)| *d == e.diagnostic)
                .map(|(_, v)| *v)
                .unwrap_or(f64::NAN);
            ExpectationResult {
                diagnostic: e.diagnostic.to_string(),
                cmp: e.cmp.to_string(),
                expected: e.value,
                tolerance: e.tol,
                measured: m,
                pass: e.pass(m),
                provenance: e.provenance,
            }
        })
        .collect();
    ExperimentReport {
        id: spec.id.clone(),
        pass: results.iter().all(|r| r.pass),
        error: None,
        results,
        wall_secs: started.elapsed().as_secs_f64(),
    }
}

fn measure(spec: &ExperimentSpec, out_dir: Option<&Path>) -> Result<Vec<(Diagnostic, f64)>, Error> {
    match &spec.kind {
        ExperimentKind::Iterate {
            operator,
            schedule,
            run,
        } => {
            let (trace, outcome) = engine::iterate(operator, schedule, run)?;
            if let Some(dir) = out_dir {
                std::fs::create_dir_all(dir)?;
                let file = std::fs::File::create(dir.join(format!("{}.csv", spec.id)))?;
                engine::write_csv(&trace, std::io::BufWriter::new(file))?;
            }
            let mut out = Vec::new();
            for e in &spec.expected {
                let v = measure_iterate(&e.diagnostic, operator, &trace, &outcome)?;
                out.push((e.diagnostic.clone(), v));
            }
            Ok(out)
        }
        ExperimentKind::OperatorIdentities { draws, seed } => {
            let b = run_identity_batch(*draws, *seed)?;
            Ok(vec![
                (Diagnostic::MaxFirmViolation, b.max_firm_violation),
                (Diagnostic::MaxScalingResidual, b.max_scaling_residual),
                (Diagnostic::MaxDoublingViolation, b.max_doubling_violation),
                (
                    Diagnostic::MaxReflectedStepViolation,
                    b.max_reflected_step_violation,
                ),
                (
                    Diagnostic::MaxReflectedNonexpViolation,
                    b.max_reflected_nonexp_violation,
                ),
            ])
        }
        ExperimentKind::AtildeAgreement { draws, seed } => {
            let gap = run_atilde_batch(*draws, *seed)?;
            Ok(vec![(Diagnostic::MaxAtildeGap, gap)])
        }
        ExperimentKind::ScalarLemmas { seed } => {
            let b = run_scalar_lemma_batch(*seed)?;
            Ok(vec![
                (
                    Diagnostic::DecayConfirmedFraction,
                    b.decay_confirmed_fraction,
                ),
                (
                    Diagnostic::BoundedConfirmedFraction,
                    b.bounded_confirmed_fraction,
                ),
                (Diagnostic::AlphaBetaMaxExcess, b.alphabeta_max_excess),
            ])
        }
    }
}

fn measure_iterate(
    d: &Diagnostic,
    operator: &OperatorSpec,
    trace: &Trace,
    outcome: &engine::RunOutcome,
) -> Result<f64, Error> {
    Ok(match d {
        Diagnostic::FinalDist => outcome.summary.final_dist.ok_or(Error::MissingOracle)?,
        Diagnostic::TailMaxResidual => {
            let start = trace.rows.len() - trace.rows.len() / 4;
            trace.rows[start..]
                .iter()
                .map(|r| r.residual)
                .fold(f64::NEG_INFINITY, f64::max)
        }
        Diagnostic::QuarterWindowDistMaxIncrease => {
            let w = engine::quarter_window_dist_maxima(trace).ok_or(Error::MissingOracle)?;
            w.windows(2)
                .map(|p| p[1] - p[0])
                .fold(f64::NEG_INFINITY, f64::max)
        }
        Diagnostic::MaxPairwiseDistLastRecorded(n) => {
            let vecs: Vec<&Vector> = trace.rows.iter().filter_map(|r| r.x.as_ref()).collect();
            if vecs.len() < *n {
                return Err(Error::InvalidParameter(format!(
                    "need {n} recorded vectors, have {}",
                    vecs.len()
                )));
            }
            let last = &vecs[vecs.len() - n..];
            let mut max = 0.0f64;
            for i in 0..last.len() {
                for j in (i + 1)..last.len() {
                    max = max.max((last[i] - last[j]).norm());
                }
            }
            max
        }
        Diagnostic::ResidualAtFinal { c } => {
            let j = operator.resolvent(*c, &outcome.final_x)?;
            (&outcome.final_x - j).norm()
        }
        Diagnostic::MaxNormLinearDeviation { slope } => trace
            .rows
            .iter()
            .map(|r| {
                let expect = slope * r.k as f64;
                (r.x_norm - expect).abs() / (1.0 + expect)
            })
            .fold(f64::NEG_INFINITY, f64::max),
        Diagnostic::SupDistExcessOverInitial => {
            let d0 = trace
                .rows
                .first()
                .and_then(|r| r.dist_to_proj)
                .ok_or(Error::MissingOracle)?;
            trace
                .rows
                .iter()
                .map(|r| r.dist_to_proj.unwrap_or(f64::NAN) - d0)
                .fold(f64::NEG_INFINITY, f64::max)
        }
        Diagnostic::MaxFejerRelSlack => trace.max_fejer_rel_slack.ok_or(Error::MissingOracle)?,
        Diagnostic::MaxStepRelSlack => trace.max_step_rel_slack,
        Diagnostic::UnboundedVerdict { threshold } => {
            match engine::boundedness_verdict(trace, *threshold) {
                BoundednessVerdict::Unbounded { .. } => 1.0,
                _ => 0.0,
            }
        }
        Diagnostic::BoundedVerdict { threshold } => {
            match engine::boundedness_verdict(trace, *threshold) {
                BoundednessVerdict::Bounded { .. } => 1.0,
                _ => 0.0,
            }
        }
        Diagnostic::AnchorTailMax => engine::anchor_limsup_check(trace)?,
        Diagnostic::DistTailOscillation => {
            let start = trace.rows.len() - trace.rows.len() / 4;
            let tail: Vec<f64> = trace.rows[start..]
                .iter()
                .filter_map(|r| r.dist_to_proj)
                .collect();
            if tail.is_empty() {
                return Err(Error::MissingOracle);
            }
            tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - tail.iter().cloned().fold(f64::INFINITY, f64::min)
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "diagnostic {other} does not apply to an iteration experiment"
            )))
        }
    })
}

fn render_text_report(report: &SuiteReport) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    // The only line that differs between identical reruns.
    let _ = writeln!(
        s,
        "# generated {:?}, total wall {:.3}s",
        std::time::SystemTime::now(),
        report.wall_secs
    );
    let _ = writeln!(
        s,
        "suite: {}",
        if report.all_pass { "PASS" } else { "FAIL" }
    );
    for exp in &report.experiments {
        let _ = writeln!(s, "[{}] {}", if exp.pass { "PASS" } else { "FAIL" }, exp.id);
        if let Some(err) = &exp.error {
            let _ = writeln!(s, "    error: {err}");
        }
        for r in &exp.results {
            let _ = writeln!(
                s,
                "    [{}] {} = {:.6e} (expected {} {:.6e} ± {:.0e}, {:?})",
                if r.pass { "pass" } else { "FAIL" },
                r.diagnostic,
                r.measured,
                r.cmp,
                r.expected,
                r.tolerance,
                r.provenance,
            );
        }
    }
    s
}

// ---------------------------------------------------------------------------
// Randomized batches
// ---------------------------------------------------------------------------

pub struct IdentityBatch {
    pub draws: usize,
    pub max_firm_violation: f64,
    pub max_scaling_residual: f64,
    pub max_doubling_violation: f64,
    pub max_reflected_step_violation: f64,
    pub max_reflected_nonexp_violation: f64,
}

/// Dimensions the randomized sweeps run over.
pub const SWEEP_DIMS: [usize; 4] = [1, 2, 4, 16];

/// Draw a random operator from the catalogue.
pub fn sample_operator(rng: &mut ChaCha12Rng, n: usize) -> OperatorSpec {
    let variant = if n == 1 {
        rng.gen_range(0..6)
    } else {
        rng.gen_range(0..5)
    };
    match variant {
        0 => sample_affine(rng, n, false),
        1 => OperatorSpec::normal_cone(sample_set(rng, n)),
        2 => OperatorSpec::constant(gaussian_vec(rng, n, 2.0)).unwrap(),
        3 => {
            let inner = if rng.gen_bool(0.5) {
                sample_affine(rng, n, true)
            } else {
                OperatorSpec::normal_cone(sample_set(rng, n))
            };
            OperatorSpec::scaled(inner, rng.gen_range(0.1..5.0)).unwrap()
        }
        4 => {
            let deficient = rng.gen_bool(0.3);
            let inner = sample_affine(rng, n, deficient);
            OperatorSpec::ball_augmented(inner, rng.gen_range(0.5..3.0)).unwrap()
        }
        _ => sample_piecewise(rng),
    }
}

fn sample_affine(rng: &mut ChaCha12Rng, n: usize, rank_deficient: bool) -> OperatorSpec {
    let rows = if rank_deficient && n > 1 {
        n / 2 + 1
    } else {
        n
    };
    let m = DMatrix::from_fn(rows, n, |_, _| gauss(rng));
    let q = m.transpose() * m;
    let b = gaussian_vec(rng, n, 1.0);
    OperatorSpec::affine_psd(q, b).unwrap()
}

fn sample_set(rng: &mut ChaCha12Rng, n: usize) -> ConvexSet {
    let spec = match rng.gen_range(0..4) {
        0 => {
            let lower: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..0.0)).collect();
            let upper: Vec<f64> = lower.iter().map(|l| l + rng.gen_range(0.1..4.0)).collect();
            ConvexSetSpec::Box { lower, upper }
        }
        1 => ConvexSetSpec::Ball {
            center: (0..n).map(|_| gauss(rng)).collect(),
            radius: rng.gen_range(0.2..3.0),
        },
        2 => {
            let m = if n == 1 { 1 } else { rng.gen_range(1..n) };
            ConvexSetSpec::AffineSubspace {
                basepoint: (0..n).map(|_| gauss(rng)).collect(),
                basis: (0..m)
                    .map(|_| (0..n).map(|_| gauss(rng)).collect())
                    .collect(),
            }
        }
        _ => {
            let mut normal: Vec<f64> = (0..n).map(|_| gauss(rng)).collect();
            if normal.iter().all(|v| *v == 0.0) {
                normal[0] = 1.0;
            }
            ConvexSetSpec::Halfspace {
                normal,
                offset: gauss(rng),
            }
        }
    };
    ConvexSet::new(spec).expect("sampled set parameters are valid")
}

fn sample_piecewise(rng: &mut ChaCha12Rng) -> OperatorSpec {
    let m = rng.gen_range(0..4);
    let mut breakpoints: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect();
    breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breakpoints.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    let m = breakpoints.len();
    let mut slopes: Vec<f64> = (0..=m).map(|_| rng.gen_range(-3.0..3.0)).collect();
    slopes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    OperatorSpec::piecewise_linear_1d(breakpoints, slopes).unwrap()
}

fn gauss(rng: &mut ChaCha12Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn gaussian_vec(rng: &mut ChaCha12Rng, n: usize, scale: f64) -> Vector {
    Vector::from_iterator(n, (0..n).map(|_| scale * gauss(rng)))
}

/// Randomized sweep of the resolvent identities over the catalogue.
///
/// Violations are relative: an inequality `lhs ≤ rhs` contributes
/// `(lhs − rhs)/(1 + scale)` with the natural scale of the statement.
pub fn run_identity_batch(draws: usize, seed: u64) -> Result<IdentityBatch, Error> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut firm = f64::NEG_INFINITY;
    let mut scaling = f64::NEG_INFINITY;
    let mut doubling = f64::NEG_INFINITY;
    let mut reflected_step = f64::NEG_INFINITY;
    let mut reflected_nonexp = f64::NEG_INFINITY;
    for i in 0..draws {
        let n = SWEEP_DIMS[i % SWEEP_DIMS.len()];
        let op = sample_operator(&mut rng, n);
        let x = gaussian_vec(&mut rng, n, 3.0);
        let y = gaussian_vec(&mut rng, n, 3.0);
        let c = rng.gen_range(0.01..10.0);
        let lambda = rng.gen_range(0.01..10.0);
        let mu = rng.gen_range(0.01..10.0);

        // firm nonexpansiveness of J_c
        let jx = op.resolvent(c, &x)?;
        let jy = op.resolvent(c, &y)?;
        let d2 = (&x - &y).norm_squared();
        let lhs = (&jx - &jy).norm_squared() + ((&x - &jx) - (&y - &jy)).norm_squared();
        firm = firm.max((lhs - d2) / (1.0 + d2));

        // stepsize identity
        let res = op.resolvent_scaling_residual(lambda, mu, &x)?;
        scaling = scaling.max(res / (1.0 + x.norm()));

        // residual doubling for c̄ ≤ c
        let c_bar = c * rng.gen_range(0.01..1.0);
        let r_small = (op.resolvent(c_bar, &x)? - &x).norm();
        let r_big = (&jx - &x).norm();
        doubling = doubling.max((r_small - 2.0 * r_big) / (1.0 + x.norm()));

        // reflected resolvent: stepsize bound and nonexpansiveness
        let tl = op.reflected_resolvent(lambda, &x)?;
        let tm = op.reflected_resolvent(mu, &x)?;
        let bound = (1.0 - mu / lambda).abs() * (&tl - &x).norm();
        reflected_step = reflected_step.max(((&tl - &tm).norm() - bound) / (1.0 + x.norm()));
        let tx = op.reflected_resolvent(c, &x)?;
        let ty = op.reflected_resolvent(c, &y)?;
        let dxy = (&x - &y).norm();
        reflected_nonexp = reflected_nonexp.max(((tx - ty).norm() - dxy) / (1.0 + dxy));
    }
    Ok(IdentityBatch {
        draws,
        max_firm_violation: firm,
        max_scaling_residual: scaling,
        max_doubling_violation: doubling,
        max_reflected_step_violation: reflected_step,
        max_reflected_nonexp_violation: reflected_nonexp,
    })
}

/// For random affine operators, stepsizes, and inputs with `‖J_{cA}x‖ < r`,
/// measures `‖J_{cÃ}x − J_{cA}x‖` (the two must agree inside the ball).
pub fn run_atilde_batch(draws: usize, seed: u64) -> Result<f64, Error> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut max_gap = f64::NEG_INFINITY;
    for i in 0..draws {
        let n = SWEEP_DIMS[i % SWEEP_DIMS.len()];
        let deficient = rng.gen_bool(0.3);
        let inner = sample_affine(&mut rng, n, deficient);
        let x = gaussian_vec(&mut rng, n, 3.0);
        let c = rng.gen_range(0.01..10.0);
        let j_inner = inner.resolvent(c, &x)?;
        let r = (j_inner.norm() + 0.1) * rng.gen_range(1.05..3.0);
        let augmented = OperatorSpec::ball_augmented(inner, r)?;
        let j_aug = augmented.resolvent(c, &x)?;
        max_gap = max_gap.max((j_aug - j_inner).norm());
    }
    Ok(max_gap)
}

pub struct ScalarLemmaBatch {
    pub decay_confirmed_fraction: f64,
    pub bounded_confirmed_fraction: f64,
    pub alphabeta_max_excess: f64,
}

fn over_linear(num: i64, shift: i64, power: u32) -> Rule {
    // num / (k + shift)^power
    let mut den = Poly::constant(1.0);
    let lin = Poly::from_coeffs(vec![shift as f64, 1.0]);
    for _ in 0..power {
        den = den.mul(&lin);
    }
    Rule::from_rational(
        RationalFn {
            num: Poly::constant(num as f64),
            den,
        },
        format!("{num}/(k+{shift})^{power}"),
    )
}

fn shifted_ratio(h: i64, j: i64) -> Rule {
    // (k+h)/(k+h+j)
    Rule::from_rational(
        RationalFn {
            num: Poly::from_coeffs(vec![h as f64, 1.0]),
            den: Poly::from_coeffs(vec![(h + j) as f64, 1.0]),
        },
        format!("(k+{h})/(k+{})", h + j),
    )
}

fn scale_rule(r: &Rule, s: f64) -> Rule {
    Rule::from_rational(
        RationalFn {
            num: r.tail().num.scale(s),
            den: r.tail().den.clone(),
        },
        format!("{s}*({})", r.source()),
    )
}

fn complement_rule(r: &Rule) -> Rule {
    Rule::from_rational(
        RationalFn::constant(1.0).sub(r.tail()),
        format!("1-({})", r.source()),
    )
}

/// Randomized admissible rule sets for the decay and boundedness lemmas plus
/// the product-sum inequality. Returns confirmation fractions and the worst
/// product-sum excess.
pub fn run_scalar_lemma_batch(seed: u64) -> Result<ScalarLemmaBatch, Error> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut decay_total = 0usize;
    let mut decay_ok = 0usize;
    let mut bounded_total = 0usize;
    let mut bounded_ok = 0usize;

    // Decay recurrences: the averaged form and both vanishing majorant parts.
    for _ in 0..100 {
        let s0 = rng.gen_range(0.0..2.0);
        let a1 = rng.gen_range(2..4); // quadratic-or-faster averaged decay
        let b_shift = a1 + rng.gen_range(0..4);
        let a = over_linear(a1, b_shift, 1);
        let b_val = -rng.gen_range(0..3);
        let b_rule = over_linear(b_val, 1, 1);
        let eps = over_linear(rng.gen_range(0..3), 2, 3);
        decay_total += 1;
        if xu_recurrence_decay(s0, &a, &b_rule, &eps)?.confirmed() {
            decay_ok += 1;
        }
    }
    for part in [MajorantPart::DecayAveraged, MajorantPart::DecayRelative] {
        for _ in 0..100 {
            let t0 = rng.gen_range(0.0..2.0);
            let j = rng.gen_range(2..4);
            let h = rng.gen_range(0..4);
            let alpha = shifted_ratio(h, j);
            let one_minus = complement_rule(&alpha);
            let s = match part {
                MajorantPart::DecayAveraged => rng.gen_range(0.0..1.0),
                _ => rng.gen_range(0.0..4.0),
            };
            let beta = scale_rule(&one_minus, s);
            let omega = over_linear(-rng.gen_range(0..3), 1, 1);
            let gamma = over_linear(rng.gen_range(0..2), 2, 3);
            decay_total += 1;
            let rep = tkleq_majorant(t0, &alpha, &beta, &omega, &gamma, part, 1)?;
            if rep.verdict.confirmed() {
                decay_ok += 1;
            }
        }
    }

    // Bounded recurrences: contraction and compensated forms.
    for _ in 0..100 {
        let t0 = rng.gen_range(0.0..5.0);
        let a_hat = rng.gen_range(0.0..0.9);
        let alpha = Rule::constant(a_hat);
        let beta = Rule::constant(rng.gen_range(0.0..2.0));
        let omega = Rule::constant(rng.gen_range(-1.0..2.0));
        let gamma = Rule::constant(rng.gen_range(-1.0..1.0));
        bounded_total += 1;
        let rep = tkleq_majorant(
            t0,
            &alpha,
            &beta,
            &omega,
            &gamma,
            MajorantPart::BoundedContraction,
            20_000,
        )?;
        if rep.verdict.confirmed() {
            bounded_ok += 1;
        }
    }
    for _ in 0..100 {
        let t0 = rng.gen_range(0.0..5.0);
        let j = rng.gen_range(1..4);
        let h = rng.gen_range(0..4);
        let alpha = shifted_ratio(h, j);
        let one_minus = complement_rule(&alpha);
        let beta = scale_rule(&one_minus, rng.gen_range(0.0..1.0));
        let omega = Rule::constant(rng.gen_range(0.0..3.0));
        // either branch of the third hypothesis
        let gamma = if rng.gen_bool(0.5) {
            scale_rule(&one_minus, rng.gen_range(0.0..1.0))
        } else {
            over_linear(rng.gen_range(-2..3), 2, 2)
        };
        bounded_total += 1;
        let rep = tkleq_majorant(
            t0,
            &alpha,
            &beta,
            &omega,
            &gamma,
            MajorantPart::BoundedCompensated,
            20_000,
        )?;
        if rep.verdict.confirmed() {
            bounded_ok += 1;
        }
    }

    // Product-sum inequality draws.
    let mut excess = f64::NEG_INFINITY;
    for i in 0..1000 {
        let (alpha, beta) = if rng.gen_bool(0.3) {
            // exact complement: the telescoping equality case
            let a = shifted_ratio(rng.gen_range(0..5), rng.gen_range(1..4));
            let b = complement_rule(&a);
            (a, b)
        } else {
            let a = if rng.gen_bool(0.5) {
                Rule::constant(rng.gen_range(0.0..1.0))
            } else {
                shifted_ratio(rng.gen_range(0..5), rng.gen_range(1..4))
            };
            let slack = rng.gen_range(0.0..1.0);
            let b = scale_rule(&complement_rule(&a), slack);
            (a, b)
        };
        let m = rng.gen_range(0..50);
        let k = if i % 97 == 0 {
            rng.gen_range(10_000..30_000) // exercise the compensated path
        } else {
            rng.gen_range(0..2000)
        };
        let (lhs, rhs) = alphabeta_partial_check(&alpha, &beta, m, k)?;
        excess = excess.max(lhs - rhs);
    }

    Ok(ScalarLemmaBatch {
        decay_confirmed_fraction: decay_ok as f64 / decay_total as f64,
        bounded_confirmed_fraction: bounded_ok as f64 / bounded_total as f64,
        alphabeta_max_excess: excess,
    })
}

// ---------------------------------------------------------------------------
// Built-in suites
// ---------------------------------------------------------------------------

pub const SUITE_NAMES: [&str; 5] = [
    "example-4",
    "boundedness-iff",
    "weak-convergence",
    "identities",
    "scalar-lemmas",
];

fn v2(a: f64, b: f64) -> Vector {
    Vector::from_column_slice(&[a, b])
}

fn unit_diag(n: usize) -> Vector {
    Vector::from_element(n, 1.0 / (n as f64).sqrt())
}

fn rule(s: &str) -> Rule {
    Rule::parse(s).expect("built-in rule strings parse")
}

/// The rank-deficient affine operator used by several built-ins:
/// `Q = diag(1, 0)`, `b = (−1, 0)`, zeros `{(1, t)}`.
pub fn rank_deficient_affine() -> OperatorSpec {
    OperatorSpec::affine_psd(
        DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]),
        v2(-1.0, 0.0),
    )
    .unwrap()
}

/// The box normal cone `∂ι_{[−1,1]²}`.
pub fn unit_box_cone() -> OperatorSpec {
    OperatorSpec::normal_cone(
        ConvexSet::new(ConvexSetSpec::Box {
            lower: vec![-1.0, -1.0],
            upper: vec![1.0, 1.0],
        })
        .unwrap(),
    )
}

/// The three concrete anchored schedules with their pinned error sequences.
///
/// Instance 1 runs growing stepsizes `c_k = k` (the k = 0 value is overridden
/// to 1 to keep the stepsize positive); instances 2 and 3 fix `c = 1`.
/// Error directions are the normalized all-ones vector; instance 2 alternates
/// sign with magnitude `1/(k+2)` (it only needs `e_k → 0`), the others decay
/// like `1/(k+2)²`. Instance 2 forces the anchor to the origin.
pub fn example_schedule(
    instance: usize,
    dim: usize,
    anchor: Vector,
    x0: Vector,
) -> Result<ParameterSchedule, Error> {
    let dir = unit_diag(dim);
    match instance {
        1 => ParameterSchedule::new(
            rule("1/(k+3)"),
            rule("1/(k+2)"),
            rule("k/(k+2)"),
            rule("1"),
            rule("{0: 1, tail: k}"),
            ErrorModel::deterministic(rule("1/(k+2)^2"), dir, false)?,
            anchor,
            x0,
        ),
        2 => ParameterSchedule::new(
            rule("0"),
            rule("(k+1)/(2(k+2))"),
            rule("(k+1)/(2(k+2))"),
            rule("1/(k+3)"),
            rule("1"),
            ErrorModel::deterministic(rule("1/(k+2)"), dir, true)?,
            Vector::zeros(dim),
            x0,
        ),
        3 => ParameterSchedule::new(
            rule("1/(k+3)"),
            rule("k/(2(k+2))"),
            rule("k/(2(k+2))"),
            rule("1"),
            rule("1"),
            ErrorModel::deterministic(rule("1/(k+2)^2"), dir, false)?,
            anchor,
            x0,
        ),
        other => Err(Error::UnknownName {
            kind: "example instance",
            name: other.to_string(),
        }),
    }
}

/// Construct a built-in suite by name.
pub fn builtin_suite(name: &str) -> Result<Vec<ExperimentSpec>, Error> {
    match name {
        "example-4" => {
            let strong_target = || {
                vec![
                    Expectation::le(Diagnostic::FinalDist, 1e-3, 0.0, Provenance::Derived),
                    Expectation::le(
                        Diagnostic::QuarterWindowDistMaxIncrease,
                        0.0,
                        1e-9,
                        Provenance::Derived,
                    ),
                    Expectation::le(Diagnostic::AnchorTailMax, 1e-3, 0.0, Provenance::Derived),
                    Expectation::le(Diagnostic::MaxFejerRelSlack, 1e-9, 0.0, Provenance::Paper),
                    Expectation::le(Diagnostic::MaxStepRelSlack, 1e-9, 0.0, Provenance::Derived),
                ]
            };
            let run = |budget| RunConfig {
                max_iters: budget,
                stop: StopRule::FixedIterations,
                record_stride: 50,
                record_vectors: false,
            };
            Ok(vec![
                ExperimentSpec {
                    id: "ex4-1-box".into(),
                    kind: ExperimentKind::Iterate {
                        operator: unit_box_cone(),
                        schedule: example_schedule(1, 2, v2(3.0, 0.0), v2(0.0, -5.0))?,
                        run: run(100_000),
                    },
                    expected: strong_target(),
                    notes: "anchored instance 1 on the box normal cone; target P_C(u) = (1,0)"
                        .into(),
                },
                ExperimentSpec {
                    id: "ex4-2-affine".into(),
                    kind: ExperimentKind::Iterate {
                        operator: rank_deficient_affine(),
                        schedule: example_schedule(2, 2, Vector::zeros(2), v2(4.0, 3.0))?,
                        run: run(200_000),
                    },
                    expected: strong_target(),
                    notes: "zero-anchored instance 2 on the rank-deficient affine operator; \
                            target is the minimum-norm zero (1,0)"
                        .into(),
                },
                ExperimentSpec {
                    id: "ex4-3-identity".into(),
                    kind: ExperimentKind::Iterate {
                        operator: OperatorSpec::identity(2),
                        schedule: example_schedule(3, 2, v2(3.0, 0.0), v2(0.0, -5.0))?,
                        run: run(100_000),
                    },
                    expected: strong_target(),
                    notes: "anchored instance 3 on the identity operator; target the origin".into(),
                },
            ])
        }
        "boundedness-iff" => Ok(vec![
            ExperimentSpec {
                id: "bnd-empty-zeros-diverges".into(),
                kind: ExperimentKind::Iterate {
                    operator: OperatorSpec::constant(v2(1.0, 0.0)).unwrap(),
                    schedule: Preset::Rockafellar.build(
                        rule("1"),
                        ErrorModel::Zero,
                        Vector::zeros(2),
                        Vector::zeros(2),
                    )?,
                    run: RunConfig {
                        max_iters: 10_000,
                        stop: StopRule::FixedIterations,
                        record_stride: 1,
                        record_vectors: false,
                    },
                },
                expected: vec![
                    Expectation::le(
                        Diagnostic::MaxNormLinearDeviation { slope: 1.0 },
                        1e-9,
                        0.0,
                        Provenance::Trivial,
                    ),
                    Expectation::within(
                        Diagnostic::UnboundedVerdict { threshold: 1e3 },
                        1.0,
                        0.0,
                        Provenance::Trivial,
                    ),
                ],
                notes: "constant operator has no zeros; iterates walk out linearly".into(),
            },
            ExperimentSpec {
                id: "bnd-nonempty-zeros-bounded".into(),
                kind: ExperimentKind::Iterate {
                    operator: OperatorSpec::identity(2),
                    schedule: Preset::Rockafellar.build(
                        rule("1"),
                        ErrorModel::Zero,
                        Vector::zeros(2),
                        v2(8.0, -6.0),
                    )?,
                    run: RunConfig {
                        max_iters: 10_000,
                        stop: StopRule::FixedIterations,
                        record_stride: 1,
                        record_vectors: false,
                    },
                },
                expected: vec![
                    Expectation::within(
                        Diagnostic::BoundedVerdict { threshold: 1e3 },
                        1.0,
                        0.0,
                        Provenance::Trivial,
                    ),
                    Expectation::le(
                        Diagnostic::SupDistExcessOverInitial,
                        0.0,
                        1e-9,
                        Provenance::Trivial,
                    ),
                    Expectation::le(Diagnostic::MaxFejerRelSlack, 1e-9, 0.0, Provenance::Paper),
                ],
                notes: "same schedule with a zero available stays inside the initial ball".into(),
            },
        ]),
        "weak-convergence" => Ok(vec![ExperimentSpec {
            id: "weak-overrelaxed-affine".into(),
            kind: ExperimentKind::Iterate {
                operator: rank_deficient_affine(),
                schedule: Preset::EcksteinBertsekas {
                    gamma: Rule::constant(1.5),
                }
                .build(
                    rule("1"),
                    ErrorModel::deterministic(rule("1/(k+2)^2"), unit_diag(2), false)?,
                    Vector::zeros(2),
                    v2(4.0, 3.0),
                )?,
                run: RunConfig {
                    max_iters: 300_000,
                    stop: StopRule::FixedIterations,
                    record_stride: 100,
                    record_vectors: true,
                },
            },
            expected: vec![
                Expectation::le(Diagnostic::TailMaxResidual, 1e-8, 0.0, Provenance::Derived),
                Expectation::le(
                    Diagnostic::MaxPairwiseDistLastRecorded(100),
                    1e-6,
                    0.0,
                    Provenance::Derived,
                ),
                Expectation::le(
                    Diagnostic::ResidualAtFinal { c: 1.0 },
                    1e-6,
                    0.0,
                    Provenance::Derived,
                ),
                Expectation::le(
                    Diagnostic::DistTailOscillation,
                    1e-4,
                    0.0,
                    Provenance::Derived,
                ),
                Expectation::le(Diagnostic::MaxFejerRelSlack, 1e-9, 0.0, Provenance::Paper),
            ],
            notes: "over-relaxed averaging with summable errors: iterates settle at some zero \
                    (kernel component frozen), the residual vanishes"
                .into(),
        }]),
        "identities" => Ok(vec![
            ExperimentSpec {
                id: "resolvent-identities".into(),
                kind: ExperimentKind::OperatorIdentities {
                    draws: 1200,
                    seed: 0x5eed_1de5,
                },
                expected: vec![
                    Expectation::le(Diagnostic::MaxFirmViolation, 1e-9, 0.0, Provenance::Paper),
                    Expectation::le(Diagnostic::MaxScalingResidual, 1e-9, 0.0, Provenance::Paper),
                    Expectation::le(
                        Diagnostic::MaxDoublingViolation,
                        1e-9,
                        0.0,
                        Provenance::Paper,
                    ),
                    Expectation::le(
                        Diagnostic::MaxReflectedStepViolation,
                        1e-9,
                        0.0,
                        Provenance::Paper,
                    ),
                    Expectation::le(
                        Diagnostic::MaxReflectedNonexpViolation,
                        1e-9,
                        0.0,
                        Provenance::Paper,
                    ),
                ],
                notes: "randomized sweep of firm nonexpansiveness, the stepsize identity, \
                        residual doubling, and the reflected-resolvent bounds"
                    .into(),
            },
            ExperimentSpec {
                id: "ball-augmented-agreement".into(),
                kind: ExperimentKind::AtildeAgreement {
                    draws: 200,
                    seed: 0xba11_ba11,
                },
                expected: vec![Expectation::le(
                    Diagnostic::MaxAtildeGap,
                    1e-8,
                    0.0,
                    Provenance::Paper,
                )],
                notes: "inside the ball the augmented resolvent equals the plain one".into(),
            },
        ]),
        "scalar-lemmas" => Ok(vec![ExperimentSpec {
            id: "scalar-lemma-recurrences".into(),
            kind: ExperimentKind::ScalarLemmas { seed: 0x5ca1a4 },
            expected: vec![
                Expectation::within(
                    Diagnostic::DecayConfirmedFraction,
                    1.0,
                    0.0,
                    Provenance::Derived,
                ),
                Expectation::within(
                    Diagnostic::BoundedConfirmedFraction,
                    1.0,
                    0.0,
                    Provenance::Derived,
                ),
                Expectation::le(
                    Diagnostic::AlphaBetaMaxExcess,
                    0.0,
                    1e-12,
                    Provenance::Paper,
                ),
            ],
            notes: "tight recurrences reach their stated limits/bounds; the product-sum \
                    inequality never overshoots"
                .into(),
        }]),
        other => Err(Error::UnknownName {
            kind: "suite",
            name: other.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_suite_passes() {
        let r = run_suite(&[], 4, None).unwrap();
        assert!(r.all_pass);
        assert!(r.experiments.is_empty());
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(
            builtin_suite("no-such-suite"),
            Err(Error::UnknownName { .. })
        ));
    }

    #[test]
    fn boundedness_suite_passes() {
        let specs = builtin_suite("boundedness-iff").unwrap();
        assert_eq!(specs.len(), 2);
        let r = run_suite(&specs, 2, None).unwrap();
        for exp in &r.experiments {
            assert!(exp.pass, "{exp:#?}");
        }
    }

    #[test]
    fn identity_batch_is_reproducible() {
        let a = run_identity_batch(64, 7).unwrap();
        let b = run_identity_batch(64, 7).unwrap();
        assert_eq!(a.max_firm_violation, b.max_firm_violation);
        assert_eq!(a.max_scaling_residual, b.max_scaling_residual);
        assert!(a.max_firm_violation <= 1e-9);
        assert!(a.max_scaling_residual <= 1e-9);
        assert!(a.max_doubling_violation <= 1e-9);
        assert!(a.max_reflected_step_violation <= 1e-9);
        assert!(a.max_reflected_nonexp_violation <= 1e-9);
    }

    #[test]
    fn atilde_batch_small() {
        let gap = run_atilde_batch(32, 3).unwrap();
        assert!(gap <= 1e-8, "gap {gap}");
    }

    #[test]
    fn example_schedules_evaluate_to_paper_values() {
        let s1 = example_schedule(1, 2, v2(3.0, 0.0), v2(0.0, -5.0)).unwrap();
        let c = s1.evaluate(5).unwrap();
        assert_eq!(
            (c.alpha, c.beta, c.gamma, c.delta, c.c),
            (0.125, 1.0 / 7.0, 5.0 / 7.0, 1.0, 5.0)
        );
        let s2 = example_schedule(2, 2, Vector::zeros(2), v2(1.0, 1.0)).unwrap();
        let c = s2.evaluate(0).unwrap();
        assert_eq!(
            (c.alpha, c.beta, c.gamma, c.delta),
            (0.0, 0.25, 0.25, 1.0 / 3.0)
        );
        assert_eq!(s2.anchor, Vector::zeros(2));
        // error magnitudes respect the stated bounds
        for k in [0u64, 1, 10, 100] {
            let e1 = s1.evaluate(k).unwrap().error;
            assert!(e1.norm() <= 1.0 / ((k as f64 + 2.0) * (k as f64 + 2.0)) + 1e-15);
        }
    }
}
