//! Runs the relaxed iteration
//! `x_{k+1} = α_k u + β_k x_k + γ_k J_{c_k A}(x_k) + δ_k e_k`
//! and records the per-step quantities the convergence analysis watches.
//!
//! Each step evaluates the resolvent exactly once; every diagnostic derives
//! from that evaluation. With a zero-set oracle available the engine also
//! checks, inline at every step, the distance inequality
//!
//! ```text
//! ‖x_{k+1} − p‖ ≤ (|β_k+γ_k/2| + |γ_k/2|)·‖x_k − p‖
//!                 + ‖α_k u + δ_k e_k − (1−β_k−γ_k) p‖
//! ```
//!
//! against the projected anchor and the projected initial point. This is the
//! master consistency invariant: any mismatch between the trace and the
//! recursion shows up here as positive slack.
//!
//! Runs are strictly sequential and deterministic: identical configurations
//! produce bit-identical traces.
//!
//! Why the diagnostics certify convergence: when the distance from the
//! iterates to every zero stabilizes, at most one point can be a limit point
//! of the sequence (two distinct limit points would force two incompatible
//! distance limits). A vanishing residual places every limit point in the
//! zero set, so a stabilized distance column plus a small residual tail pins
//! the whole sequence to a single zero.

use std::io::Write;

use crate::operators::{Emptiness, FactorCache, OperatorSpec, ZeroSetOracle};
use crate::schedules::ParameterSchedule;
use crate::{Error, Vector};

/// Default tolerance for asymptotic-regularity verdicts; harmonic schedules
/// need ~1e5 steps to push residuals this low on the catalogued problems.
pub const TOL_ASYMPTOTIC_REGULARITY: f64 = 1e-6;
/// Default norm threshold for declaring divergence.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub enum StopRule {
    /// Run exactly `max_iters` steps.
    FixedIterations,
    /// Stop once `‖x_k − J_{c_k A} x_k‖ ≤ tol`.
    ResidualBelow { tol: f64 },
    /// Stop once `‖x_k − P_{zer A} u‖ ≤ tol`; needs a zero-set oracle.
    DistanceToTargetBelow { tol: f64 },
    /// Stop once `‖x_k‖` exceeds the threshold.
    DivergenceDetected { norm_threshold: f64 },
}

impl StopRule {
    fn validate(&self) -> Result<(), Error> {
        let tol = match self {
            StopRule::FixedIterations => return Ok(()),
            StopRule::ResidualBelow { tol } => *tol,
            StopRule::DistanceToTargetBelow { tol } => *tol,
            StopRule::DivergenceDetected { norm_threshold } => *norm_threshold,
        };
        if tol > 0.0 && tol.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "stop tolerance must be positive, got {tol}"
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub max_iters: u64,
    pub stop: StopRule,
    /// Diagnostics are recorded every `record_stride` steps (plus the final
    /// step); the stride never alters the iteration itself.
    pub record_stride: u64,
    /// Keep full iterate vectors in the trace rows, not just norms.
    pub record_vectors: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_iters: 10_000,
            stop: StopRule::FixedIterations,
            record_stride: 1,
            record_vectors: false,
        }
    }
}

impl RunConfig {
    fn validate(&self) -> Result<(), Error> {
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be ≥ 1".into()));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidParameter("record_stride must be ≥ 1".into()));
        }
        self.stop.validate()
    }
}

/// One recorded step.
#[derive(Debug, Clone)]
pub struct TraceRow {
    pub k: u64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub c: f64,
    /// `‖x_k − J_{c_k A} x_k‖`, the asymptotic-regularity quantity.
    pub residual: f64,
    /// `‖x_{k+1} − x_k‖`.
    pub step_norm: f64,
    /// `‖x_k − P_{zer A} u‖` when an oracle projection exists.
    pub dist_to_proj: Option<f64>,
    /// `⟨u − P_{zer A}u, x_k − P_{zer A}u⟩` when available.
    pub anchor_ip: Option<f64>,
    pub x_norm: f64,
    /// `‖x_{k+1} − J_{c_k A} x_k‖`, the shifted residual.
    pub shifted_residual: f64,
    /// Relative slack in the per-step distance inequality at this step.
    pub fejer_slack: Option<f64>,
    pub x: Option<Vector>,
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub rows: Vec<TraceRow>,
    pub dim: usize,
    /// `P_{zer A} u` when the oracle provides it.
    pub projected_anchor: Option<Vector>,
    /// Max over all steps (not only recorded ones) of the relative slack in
    /// the master distance inequality; `None` without an oracle projection.
    pub max_fejer_rel_slack: Option<f64>,
    /// Max relative slack of the step-size consistency bound
    /// `‖x_{k+1}−x_k‖ ≤ |α|‖u−x_k‖ + |γ|r_k + ‖δe_k‖ + |1−α−β−γ|‖x_k‖`.
    pub max_step_rel_slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunVerdict {
    /// The distance-to-target rule fired.
    Converged,
    /// The residual rule fired.
    ResidualConverged,
    /// Norm blow-up or a nonfinite iterate (the index is where it appeared).
    Diverged { at: u64 },
    /// `max_iters` reached without any rule firing.
    BudgetExhausted,
}

#[derive(Debug, Clone)]
pub struct SummaryStats {
    pub min_residual: f64,
    pub max_residual: f64,
    pub final_residual: f64,
    pub max_x_norm: f64,
    pub final_dist: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub verdict: RunVerdict,
    pub final_x: Vector,
    pub iterations: u64,
    pub summary: SummaryStats,
}

/// Execute the iteration.
pub fn iterate(
    op: &OperatorSpec,
    schedule: &ParameterSchedule,
    config: &RunConfig,
) -> Result<(Trace, RunOutcome), Error> {
    config.validate()?;
    let dim = op.dim();
    if schedule.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: schedule.dim(),
        });
    }
    let oracle = op.zero_set_oracle();
    let projected_anchor = oracle_projection(&oracle, &schedule.anchor)?;
    let projected_x0 = oracle_projection(&oracle, &schedule.x0)?;
    let anchor_dir = projected_anchor.as_ref().map(|p| &schedule.anchor - p);

    if matches!(config.stop, StopRule::DistanceToTargetBelow { .. }) && projected_anchor.is_none() {
        return Err(Error::MissingOracle);
    }

    let cache = FactorCache::new();
    let mut x = schedule.x0.clone();
    let mut rows: Vec<TraceRow> = Vec::new();
    let mut max_fejer: Option<f64> = projected_anchor.as_ref().map(|_| f64::NEG_INFINITY);
    if max_fejer.is_none() && projected_x0.is_some() {
        max_fejer = Some(f64::NEG_INFINITY);
    }
    let mut max_step_slack = f64::NEG_INFINITY;
    let mut min_res = f64::INFINITY;
    let mut max_res = f64::NEG_INFINITY;
    let mut final_res = f64::NAN;
    let mut max_norm: f64 = 0.0;
    let mut verdict = RunVerdict::BudgetExhausted;
    let mut iterations = 0;

    for k in 0..config.max_iters {
        let co = schedule.evaluate(k)?;
        let j = op.resolvent_cached(co.c, &x, &cache)?;
        let residual = (&x - &j).norm();
        let x_norm = x.norm();
        min_res = min_res.min(residual);
        max_res = max_res.max(residual);
        final_res = residual;
        max_norm = max_norm.max(x_norm);

        let dist = projected_anchor.as_ref().map(|p| (&x - p).norm());
        let anchor_ip = match (&anchor_dir, &projected_anchor) {
            (Some(d), Some(p)) => Some(d.dot(&(&x - p))),
            _ => None,
        };

        // x_{k+1} = α u + β x + γ J + δ e
        let next =
            &schedule.anchor * co.alpha + &x * co.beta + &j * co.gamma + &co.error * co.delta;
        let step_norm = (&next - &x).norm();
        let shifted_residual = (&next - &j).norm();

        // Master consistency: the distance inequality toward each known zero.
        let mut fejer_slack_here: Option<f64> = None;
        for p in [&projected_anchor, &projected_x0].into_iter().flatten() {
            let rho = (co.beta + 0.5 * co.gamma).abs() + (0.5 * co.gamma).abs();
            let drift = (&schedule.anchor * co.alpha + &co.error * co.delta
                - p * (1.0 - co.beta - co.gamma))
                .norm();
            let rhs = rho * (&x - p).norm() + drift;
            let lhs = (&next - p).norm();
            let slack = (lhs - rhs) / (1.0 + rhs);
            fejer_slack_here = Some(fejer_slack_here.map_or(slack, |s: f64| s.max(slack)));
        }
        if let (Some(m), Some(s)) = (max_fejer.as_mut(), fejer_slack_here) {
            *m = m.max(s);
        }

        // Step-size consistency bound from rearranging the recursion.
        let step_bound = co.alpha.abs() * (&schedule.anchor - &x).norm()
            + co.gamma.abs() * residual
            + (&co.error * co.delta).norm()
            + (1.0 - co.alpha - co.beta - co.gamma).abs() * x_norm;
        max_step_slack = max_step_slack.max((step_norm - step_bound) / (1.0 + step_bound));

        let mut stopping = true;
        if !next.iter().all(|v| v.is_finite()) {
            verdict = RunVerdict::Diverged { at: k + 1 };
        } else {
            match &config.stop {
                StopRule::FixedIterations => stopping = false,
                StopRule::ResidualBelow { tol } => {
                    if residual <= *tol {
                        verdict = RunVerdict::ResidualConverged;
                    } else {
                        stopping = false;
                    }
                }
                StopRule::DistanceToTargetBelow { tol } => {
                    if dist.is_some_and(|d| d <= *tol) {
                        verdict = RunVerdict::Converged;
                    } else {
                        stopping = false;
                    }
                }
                StopRule::DivergenceDetected { norm_threshold } => {
                    if next.norm() > *norm_threshold {
                        verdict = RunVerdict::Diverged { at: k + 1 };
                    } else {
                        stopping = false;
                    }
                }
            }
        }

        // The terminal step is always recorded, stride or not.
        if k % config.record_stride == 0 || k + 1 == config.max_iters || stopping {
            rows.push(TraceRow {
                k,
                alpha: co.alpha,
                beta: co.beta,
                gamma: co.gamma,
                delta: co.delta,
                c: co.c,
                residual,
                step_norm,
                dist_to_proj: dist,
                anchor_ip,
                x_norm,
                shifted_residual,
                fejer_slack: fejer_slack_here,
                x: config.record_vectors.then(|| x.clone()),
            });
        }
        iterations = k + 1;
        x = next;
        if stopping {
            break;
        }
    }

    let final_dist = projected_anchor.as_ref().map(|p| (&x - p).norm());
    let outcome = RunOutcome {
        verdict,
        final_x: x,
        iterations,
        summary: SummaryStats {
            min_residual: min_res,
            max_residual: max_res,
            final_residual: final_res,
            max_x_norm: max_norm,
            final_dist,
        },
    };
    let trace = Trace {
        rows,
        dim,
        projected_anchor,
        max_fejer_rel_slack: max_fejer.filter(|m| m.is_finite()),
        max_step_rel_slack: max_step_slack,
    };
    Ok((trace, outcome))
}

fn oracle_projection(oracle: &ZeroSetOracle, point: &Vector) -> Result<Option<Vector>, Error> {
    if oracle.emptiness != Emptiness::KnownNonempty {
        return Ok(None);
    }
    match oracle.project(point) {
        Some(p) => Ok(Some(p?)),
        None => Ok(None),
    }
}

// ---------------------------------------------------------------------------
// Verdicts over traces
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum RegularityVerdict {
    /// Tail max of the residual over the last quarter is below tolerance;
    /// `at` is the index where that max occurred.
    Holds {
        tail_max: f64,
        at: u64,
    },
    Fails {
        tail_max: f64,
        at: u64,
    },
    /// Trace too short for a tail.
    Undecided,
}

/// Did `x_k − J_{c_k A} x_k → 0` materialize on this run?
pub fn asymptotic_regularity_verdict(trace: &Trace, tol: f64) -> RegularityVerdict {
    if trace.rows.len() < 4 {
        return RegularityVerdict::Undecided;
    }
    let start = trace.rows.len() - trace.rows.len() / 4;
    let tail = &trace.rows[start..];
    let (at, tail_max) =
        tail.iter()
            .map(|r| (r.k, r.residual))
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (k, r)| {
                    if r > acc.1 {
                        (k, r)
                    } else {
                        acc
                    }
                },
            );
    if tail_max <= tol {
        RegularityVerdict::Holds { tail_max, at }
    } else {
        RegularityVerdict::Fails { tail_max, at }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundednessVerdict {
    Bounded { sup_norm: f64 },
    Unbounded { witness: u64, norm: f64 },
    Undecided,
}

/// Classifies the recorded norms: unbounded needs the threshold exceeded with
/// positive drift over the final half (slope significant at the 95% level),
/// bounded needs the sup below threshold with a nonpositive tail slope.
pub fn boundedness_verdict(trace: &Trace, threshold: f64) -> BoundednessVerdict {
    if trace.rows.len() < 8 {
        return BoundednessVerdict::Undecided;
    }
    let half = &trace.rows[trace.rows.len() / 2..];
    let (slope, stderr) = norm_slope(half);
    let sup = trace
        .rows
        .iter()
        .map(|r| r.x_norm)
        .fold(f64::NEG_INFINITY, f64::max);
    let exceed = trace.rows.iter().find(|r| r.x_norm > threshold);
    let drift_up = slope > 1.96 * stderr && slope > 0.0;
    match exceed {
        Some(row) if drift_up => BoundednessVerdict::Unbounded {
            witness: row.k,
            norm: row.x_norm,
        },
        None if sup < threshold && (slope <= 0.0 || slope <= 1.96 * stderr) => {
            BoundednessVerdict::Bounded { sup_norm: sup }
        }
        _ => BoundednessVerdict::Undecided,
    }
}

fn norm_slope(rows: &[TraceRow]) -> (f64, f64) {
    let n = rows.len() as f64;
    let mean_k = rows.iter().map(|r| r.k as f64).sum::<f64>() / n;
    let mean_y = rows.iter().map(|r| r.x_norm).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for r in rows {
        let dk = r.k as f64 - mean_k;
        sxx += dk * dk;
        sxy += dk * (r.x_norm - mean_y);
    }
    if sxx == 0.0 {
        return (0.0, 0.0);
    }
    let slope = sxy / sxx;
    let mut sse = 0.0;
    for r in rows {
        let fit = mean_y + slope * (r.k as f64 - mean_k);
        sse += (r.x_norm - fit).powi(2);
    }
    let dof = (n - 2.0).max(1.0);
    let stderr = (sse / dof / sxx).sqrt();
    (slope, stderr)
}

/// Max of the anchor inner product `⟨u − P u, x_k − P u⟩` over the final
/// quarter of the trace; under the strong-convergence hypotheses this tail
/// max must sink to ≤ 0 (up to tolerance).
pub fn anchor_limsup_check(trace: &Trace) -> Result<f64, Error> {
    let start = trace.rows.len() - trace.rows.len() / 4;
    trace.rows[start..]
        .iter()
        .map(|r| r.anchor_ip.ok_or(Error::MissingOracle))
        .try_fold(f64::NEG_INFINITY, |acc, v| Ok(acc.max(v?)))
}

/// Maxima of `dist_to_proj` over four consecutive quarters of the trace.
pub fn quarter_window_dist_maxima(trace: &Trace) -> Option<[f64; 4]> {
    let dists: Vec<f64> = trace.rows.iter().filter_map(|r| r.dist_to_proj).collect();
    if dists.len() < 8 {
        return None;
    }
    let q = dists.len() / 4;
    let mut out = [f64::NEG_INFINITY; 4];
    for (i, slot) in out.iter_mut().enumerate() {
        let lo = i * q;
        let hi = if i == 3 { dists.len() } else { (i + 1) * q };
        *slot = dists[lo..hi]
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// CSV export
// ---------------------------------------------------------------------------

/// Writes the trace as CSV with 17 significant digits so values round-trip
/// bit-faithfully. Columns:
/// `k, alpha, beta, gamma, delta, c, residual, step_norm, dist_to_proj,
/// anchor_ip, x_norm[, x_0..x_{n-1}]`; the two oracle columns are omitted
/// when no projection was available instead of being filled with estimates.
pub fn write_csv<W: Write>(trace: &Trace, mut w: W) -> std::io::Result<()> {
    let has_oracle = trace.rows.iter().any(|r| r.dist_to_proj.is_some());
    let has_vectors = trace.rows.iter().any(|r| r.x.is_some());
    let mut header = String::from("k,alpha,beta,gamma,delta,c,residual,step_norm");
    if has_oracle {
        header.push_str(",dist_to_proj,anchor_ip");
    }
    header.push_str(",x_norm");
    if has_vectors {
        for i in 0..trace.dim {
            header.push_str(&format!(",x_{i}"));
        }
    }
    writeln!(w, "{header}")?;
    for row in &trace.rows {
        let mut line = format!(
            "{},{},{},{},{},{},{},{}",
            row.k,
            fmt(row.alpha),
            fmt(row.beta),
            fmt(row.gamma),
            fmt(row.delta),
            fmt(row.c),
            fmt(row.residual),
            fmt(row.step_norm),
        );
        if has_oracle {
            line.push_str(&format!(
                ",{},{}",
                fmt(row.dist_to_proj.unwrap_or(f64::NAN)),
                fmt(row.anchor_ip.unwrap_or(f64::NAN))
            ));
        }
        line.push_str(&format!(",{}", fmt(row.x_norm)));
        if has_vectors {
            if let Some(x) = &row.x {
                for v in x.iter() {
                    line.push_str(&format!(",{}", fmt(*v)));
                }
            } else {
                for _ in 0..trace.dim {
                    line.push(',');
                }
            }
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{ConvexSet, ConvexSetSpec};
    use crate::rules::Rule;
    use crate::schedules::{ErrorModel, ParameterSchedule, Preset};

    fn v(s: &[f64]) -> Vector {
        Vector::from_column_slice(s)
    }

    fn rockafellar(dim: usize, x0: Vector) -> ParameterSchedule {
        Preset::Rockafellar
            .build(
                Rule::constant(1.0),
                ErrorModel::Zero,
                Vector::zeros(dim),
                x0,
            )
            .unwrap()
    }

    #[test]
    fn identity_operator_halves_each_step() {
        // A = Id, J = x/2: x_k = 8·2^{-k}, so x_3 = 1.
        let op = OperatorSpec::identity(1);
        let schedule = rockafellar(1, v(&[8.0]));
        let cfg = RunConfig {
            max_iters: 10,
            ..Default::default()
        };
        let (trace, out) = iterate(&op, &schedule, &cfg).unwrap();
        assert!((trace.rows[3].x_norm - 1.0).abs() < 1e-12);
        assert!((out.final_x[0] - 8.0 * 0.5f64.powi(10)).abs() < 1e-15);
        // residual r_k = x_k/2 decays geometrically
        assert!((trace.rows[0].residual - 4.0).abs() < 1e-12);
        assert!((trace.rows[1].residual - 2.0).abs() < 1e-12);
    }

    #[test]
    fn constant_operator_walks_linearly() {
        // J(x) = x − cv: x_k = −k·v from the origin, ‖x_k‖ = k.
        let op = OperatorSpec::constant(v(&[1.0, 0.0])).unwrap();
        let schedule = rockafellar(2, v(&[0.0, 0.0]));
        let cfg = RunConfig {
            max_iters: 100,
            ..Default::default()
        };
        let (trace, _) = iterate(&op, &schedule, &cfg).unwrap();
        for row in &trace.rows {
            assert!((row.x_norm - row.k as f64).abs() < 1e-12);
        }
        // empty zero set: no oracle columns
        assert!(trace.rows[0].dist_to_proj.is_none());
        assert!(trace.max_fejer_rel_slack.is_none());
    }

    #[test]
    fn anchored_box_run_reaches_projected_anchor() {
        // Anchored schedule on A = N_{[−1,1]²} with u = (3,0): limit P_C(u) = (1,0).
        let op = OperatorSpec::normal_cone(
            ConvexSet::new(ConvexSetSpec::Box {
                lower: vec![-1.0, -1.0],
                upper: vec![1.0, 1.0],
            })
            .unwrap(),
        );
        let schedule = ParameterSchedule::new(
            Rule::parse("1/(k+3)").unwrap(),
            Rule::parse("k/(2(k+2))").unwrap(),
            Rule::parse("k/(2(k+2))").unwrap(),
            Rule::constant(1.0),
            Rule::constant(1.0),
            ErrorModel::deterministic(Rule::parse("1/(k+2)^2").unwrap(), v(&[1.0, 1.0]), false)
                .unwrap(),
            v(&[3.0, 0.0]),
            v(&[0.0, -5.0]),
        )
        .unwrap();
        let cfg = RunConfig {
            max_iters: 60_000,
            record_stride: 50,
            ..Default::default()
        };
        let (trace, out) = iterate(&op, &schedule, &cfg).unwrap();
        let target = v(&[1.0, 0.0]);
        assert!((out.final_x - &target).norm() < 1e-3);
        assert_eq!(trace.projected_anchor.as_ref().unwrap(), &target);
        // distances must shrink toward zero
        let d0 = trace.rows[0].dist_to_proj.unwrap();
        let dl = trace.rows.last().unwrap().dist_to_proj.unwrap();
        assert!(dl < 1e-3 && d0 > 1.0);
        // master consistency inequality held throughout
        assert!(trace.max_fejer_rel_slack.unwrap() <= 1e-9);
        assert!(trace.max_step_rel_slack <= 1e-9);
        // anchor inner products sink below tolerance
        assert!(anchor_limsup_check(&trace).unwrap() <= 1e-3);
    }

    #[test]
    fn asymptotic_regularity_verdicts() {
        let op = OperatorSpec::identity(1);
        let schedule = rockafellar(1, v(&[8.0]));
        let cfg = RunConfig {
            max_iters: 100,
            ..Default::default()
        };
        let (trace, _) = iterate(&op, &schedule, &cfg).unwrap();
        assert!(matches!(
            asymptotic_regularity_verdict(&trace, 1e-6),
            RegularityVerdict::Holds { .. }
        ));

        let op = OperatorSpec::constant(v(&[1.0])).unwrap();
        let schedule = rockafellar(1, v(&[0.0]));
        let (trace, _) = iterate(&op, &schedule, &cfg).unwrap();
        match asymptotic_regularity_verdict(&trace, 1e-6) {
            RegularityVerdict::Fails { tail_max, .. } => assert!((tail_max - 1.0).abs() < 1e-12),
            other => panic!("expected failure, got {other:?}"),
        }

        let short = Trace {
            rows: trace.rows[..1].to_vec(),
            dim: 1,
            projected_anchor: None,
            max_fejer_rel_slack: None,
            max_step_rel_slack: 0.0,
        };
        assert_eq!(
            asymptotic_regularity_verdict(&short, 1e-6),
            RegularityVerdict::Undecided
        );
    }

    #[test]
    fn boundedness_verdicts() {
        let cfg = RunConfig {
            max_iters: 10_000,
            ..Default::default()
        };
        let op = OperatorSpec::constant(v(&[1.0])).unwrap();
        let (trace, _) = iterate(&op, &rockafellar(1, v(&[0.0])), &cfg).unwrap();
        assert!(matches!(
            boundedness_verdict(&trace, 1e3),
            BoundednessVerdict::Unbounded { .. }
        ));

        let op = OperatorSpec::identity(1);
        let (trace, _) = iterate(&op, &rockafellar(1, v(&[8.0])), &cfg).unwrap();
        assert!(matches!(
            boundedness_verdict(&trace, 1e3),
            BoundednessVerdict::Bounded { .. }
        ));

        let short = Trace {
            rows: trace.rows[..3].to_vec(),
            dim: 1,
            projected_anchor: None,
            max_fejer_rel_slack: None,
            max_step_rel_slack: 0.0,
        };
        assert_eq!(
            boundedness_verdict(&short, 1e3),
            BoundednessVerdict::Undecided
        );
    }

    #[test]
    fn nonfinite_iterates_are_reported_as_divergence() {
        // γ = 5 over-relaxation on A = Id: x_{k+1} = -1.5 x_k blows up and
        // eventually overflows; the engine reports the offending index.
        let op = OperatorSpec::identity(1);
        let schedule = ParameterSchedule::new(
            Rule::constant(0.0),
            Rule::constant(-4.0),
            Rule::constant(5.0),
            Rule::constant(1.0),
            Rule::constant(1.0),
            ErrorModel::Zero,
            v(&[0.0]),
            v(&[1.0]),
        )
        .unwrap();
        let cfg = RunConfig {
            max_iters: 10_000,
            record_stride: 997, // prime stride: terminal step is off-stride
            ..Default::default()
        };
        let (trace, out) = iterate(&op, &schedule, &cfg).unwrap();
        let RunVerdict::Diverged { at } = out.verdict else {
            panic!("expected divergence, got {:?}", out.verdict);
        };
        assert!(at < 10_000, "overflow appears well before the budget");
        // the terminal step is recorded even off-stride
        assert_eq!(trace.rows.last().unwrap().k + 1, at);
        assert_eq!(out.iterations, at);
    }

    #[test]
    fn anchor_inner_products_at_trivial_configurations() {
        let op = OperatorSpec::normal_cone(
            ConvexSet::new(ConvexSetSpec::Box {
                lower: vec![-1.0, -1.0],
                upper: vec![1.0, 1.0],
            })
            .unwrap(),
        );
        let cfg = RunConfig {
            max_iters: 50,
            ..Default::default()
        };
        // u inside the zero set: u = P u, so h_k ≡ 0
        let schedule = ParameterSchedule::new(
            Rule::parse("1/(k+3)").unwrap(),
            Rule::constant(0.0),
            Rule::parse("k/(k+2)").unwrap(),
            Rule::constant(1.0),
            Rule::constant(1.0),
            ErrorModel::Zero,
            v(&[0.5, 0.5]),
            v(&[3.0, -3.0]),
        )
        .unwrap();
        let (trace, _) = iterate(&op, &schedule, &cfg).unwrap();
        assert!(trace.rows.iter().all(|r| r.anchor_ip == Some(0.0)));

        // iterates pinned at a zero z ≠ P u: h_k = ⟨u − Pu, z − Pu⟩ ≤ 0 by
        // the projection characterization
        let z = v(&[-1.0, -1.0]);
        let pinned = ParameterSchedule::new(
            Rule::constant(0.0),
            Rule::constant(0.0),
            Rule::constant(1.0),
            Rule::constant(1.0),
            Rule::constant(1.0),
            ErrorModel::Zero,
            v(&[3.0, 0.0]),
            z,
        )
        .unwrap();
        let (trace, _) = iterate(&op, &pinned, &cfg).unwrap();
        let h = anchor_limsup_check(&trace).unwrap();
        assert!(h <= 0.0, "obtuse-angle property violated: {h}");
        assert!(trace.rows.iter().all(|r| r.step_norm == 0.0));
    }

    #[test]
    fn traces_are_deterministic() {
        let op = OperatorSpec::identity(2);
        let schedule = ParameterSchedule::new(
            Rule::parse("1/(k+3)").unwrap(),
            Rule::constant(0.0),
            Rule::parse("k/(k+2)").unwrap(),
            Rule::constant(1.0),
            Rule::constant(1.0),
            ErrorModel::RandomBounded {
                bound: Rule::parse("1/(k+2)^2").unwrap(),
                seed: 99,
            },
            v(&[1.0, -1.0]),
            v(&[5.0, 5.0]),
        )
        .unwrap();
        let cfg = RunConfig {
            max_iters: 500,
            record_stride: 7,
            record_vectors: true,
            ..Default::default()
        };
        let mut csv1 = Vec::new();
        let mut csv2 = Vec::new();
        let (t1, _) = iterate(&op, &schedule, &cfg).unwrap();
        let (t2, _) = iterate(&op, &schedule, &cfg).unwrap();
        write_csv(&t1, &mut csv1).unwrap();
        write_csv(&t2, &mut csv2).unwrap();
        assert_eq!(csv1, csv2);
    }

    #[test]
    fn csv_round_trips_values() {
        let op = OperatorSpec::identity(1);
        let (trace, _) = iterate(
            &op,
            &rockafellar(1, v(&[1.0 / 3.0])),
            &RunConfig {
                max_iters: 5,
                ..Default::default()
            },
        )
        .unwrap();
        let mut buf = Vec::new();
        write_csv(&trace, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("k,alpha,beta,gamma,delta,c,residual,step_norm"));
        let first = lines.next().unwrap();
        let cols: Vec<&str> = first.split(',').collect();
        let x_norm: f64 = cols[cols.len() - 1].parse().unwrap();
        assert_eq!(x_norm, 1.0 / 3.0);
    }

    #[test]
    fn stop_rules_fire() {
        let op = OperatorSpec::identity(1);
        let (_, out) = iterate(
            &op,
            &rockafellar(1, v(&[8.0])),
            &RunConfig {
                max_iters: 1000,
                stop: StopRule::ResidualBelow { tol: 1e-3 },
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(out.verdict, RunVerdict::ResidualConverged);
        assert!(out.iterations < 30);

        let (_, out) = iterate(
            &op,
            &rockafellar(1, v(&[8.0])),
            &RunConfig {
                max_iters: 1000,
                stop: StopRule::DistanceToTargetBelow { tol: 1e-3 },
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(out.verdict, RunVerdict::Converged);

        let op = OperatorSpec::constant(v(&[1.0])).unwrap();
        let (_, out) = iterate(
            &op,
            &rockafellar(1, v(&[0.0])),
            &RunConfig {
                max_iters: 10_000,
                stop: StopRule::DivergenceDetected {
                    norm_threshold: 100.0,
                },
                ..Default::default()
            },
        )
        .unwrap();
        assert!(matches!(out.verdict, RunVerdict::Diverged { .. }));
    }
}
