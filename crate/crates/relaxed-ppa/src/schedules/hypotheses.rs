//! Classifies a schedule against the condition bundles of the boundedness
//! and convergence theorems.
//!
//! Every condition is a statement about scalar sequences built from the
//! schedule's rules: pointwise inequalities, summability or divergence of a
//! series, limits, liminf/limsup windows, and boundedness. Because the rule
//! language is rational functions with finitely many overrides, each such
//! sequence agrees with a single rational function beyond a computable index
//! and is single-signed there. That makes the checker sound rather than
//! heuristic:
//!
//! * pointwise claims are scanned up to `max(horizon, stability index)` and
//!   then certified symbolically from the sign of the tail rational;
//! * summability is decided by the degree gap (`Σ |p/q| < ∞  iff
//!   deg q − deg p ≥ 2`), divergence additionally needs eventual positivity;
//! * liminf/limsup claims are settled by the symbolic limit and are never
//!   declared from numerics alone — when no tail rational is available the
//!   verdict is `Undecided` with a tail-window estimate attached.
//!
//! Random error models only expose an upper bound on `‖e_k‖`; conditions that
//! remain monotone under such a bound (summability, boundedness, decay to
//! zero) still certify, the rest report `Undecided` unless a user-declared
//! tag settles them.

use std::fmt;

use crate::rules::{Limit, RationalFn, Rule};
use crate::schedules::{ParameterSchedule, SummabilityClaim};
use crate::Error;

/// Hard cap on pointwise scans regardless of the requested horizon.
const SCAN_CAP: u64 = 2_000_000;
/// Slack for comparing symbolic limits against stated bounds.
const LIMIT_EPS: f64 = 1e-12;

/// The five condition bundles the checker knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    /// zer A ≠ ∅ ⇔ (x_k) bounded, under summable coefficient perturbations.
    BoundednessSummable,
    /// The same equivalence under the five structural coefficient families.
    BoundednessFamilies,
    /// Convergence of (x_k) to some zero of A.
    WeakConvergence,
    /// Strong convergence to the projected anchor P_{zer A} u.
    StrongConvergence,
    /// Strong convergence with error terms controlled relative to 1−β−γ.
    StrongConvergenceNormalized,
}

impl TheoremId {
    pub const ALL: [TheoremId; 5] = [
        TheoremId::BoundednessSummable,
        TheoremId::BoundednessFamilies,
        TheoremId::WeakConvergence,
        TheoremId::StrongConvergence,
        TheoremId::StrongConvergenceNormalized,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TheoremId::BoundednessSummable => "boundedness-summable",
            TheoremId::BoundednessFamilies => "boundedness-families",
            TheoremId::WeakConvergence => "weak-convergence",
            TheoremId::StrongConvergence => "strong-convergence",
            TheoremId::StrongConvergenceNormalized => "strong-convergence-normalized",
        }
    }

    pub fn parse(name: &str) -> Result<TheoremId, Error> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name() == name)
            .ok_or_else(|| Error::UnknownName {
                kind: "theorem",
                name: name.to_string(),
            })
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Holds,
    /// `witness` is the violating index for pointwise conditions; asymptotic
    /// failures are certified symbolically and carry no single index.
    Fails {
        witness: Option<u64>,
    },
    Undecided,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "holds"),
            Verdict::Fails { witness: Some(k) } => write!(f, "fails(witness k={k})"),
            Verdict::Fails { witness: None } => write!(f, "fails"),
            Verdict::Undecided => write!(f, "undecided"),
        }
    }
}

/// How a condition's verdict was settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tag {
    RuleDerived,
    UserDeclared,
    FiniteHorizon,
}

#[derive(Debug, Clone)]
pub struct ConditionEvidence {
    pub condition: String,
    pub verdict: Verdict,
    pub tag: Tag,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub verdict: Verdict,
    pub evidence: Vec<ConditionEvidence>,
}

#[derive(Debug, Clone)]
pub struct HypothesisReport {
    pub horizon: u64,
    pub entries: Vec<TheoremReport>,
}

impl HypothesisReport {
    pub fn get(&self, id: TheoremId) -> &TheoremReport {
        self.entries.iter().find(|e| e.theorem == id).unwrap()
    }
}

// ---------------------------------------------------------------------------
// Sequence expressions
// ---------------------------------------------------------------------------

/// Whether a tail rational reproduces the sequence or only dominates it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Fidelity {
    Exact,
    UpperBound,
}

#[derive(Debug, Clone)]
struct TailInfo {
    r: RationalFn,
    fidelity: Fidelity,
    /// Index from which `r` matches/dominates the sequence and is single-signed.
    stable: u64,
}

/// Scalar sequence built from schedule rules.
#[derive(Debug, Clone)]
pub(crate) enum Expr {
    Rule(Rule),
    /// `‖e_k‖`; `exact` is false for random error models, where the rule is
    /// only an upper bound.
    ErrorNorm {
        rule: Rule,
        exact: bool,
    },
    Const(f64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Abs(Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn rule(r: &Rule) -> Expr {
        Expr::Rule(r.clone())
    }

    fn eval(&self, k: u64) -> Result<f64, Error> {
        Ok(match self {
            Expr::Rule(r) => r.eval(k)?,
            Expr::ErrorNorm { rule, .. } => rule.eval(k)?.abs(),
            Expr::Const(v) => *v,
            Expr::Add(a, b) => a.eval(k)? + b.eval(k)?,
            Expr::Sub(a, b) => a.eval(k)? - b.eval(k)?,
            Expr::Mul(a, b) => a.eval(k)? * b.eval(k)?,
            Expr::Div(a, b) => {
                let d = b.eval(k)?;
                if d == 0.0 {
                    return Err(Error::RuleEval {
                        k,
                        msg: "division by zero in condition expression".into(),
                    });
                }
                a.eval(k)? / d
            }
            Expr::Abs(a) => a.eval(k)?.abs(),
            Expr::Max(a, b) => a.eval(k)?.max(b.eval(k)?),
        })
    }

    /// Tail rational (with fidelity) where derivable.
    fn tail(&self) -> Option<TailInfo> {
        match self {
            Expr::Rule(r) => Some(TailInfo {
                r: r.tail().clone(),
                fidelity: Fidelity::Exact,
                stable: r.stable_from(),
            }),
            Expr::ErrorNorm { rule, exact } => {
                let base = TailInfo {
                    r: rule.tail().clone(),
                    fidelity: Fidelity::Exact,
                    stable: rule.stable_from(),
                };
                let abs = abs_tail(&base)?;
                Some(TailInfo {
                    fidelity: if *exact {
                        Fidelity::Exact
                    } else {
                        Fidelity::UpperBound
                    },
                    ..abs
                })
            }
            Expr::Const(v) => Some(TailInfo {
                r: RationalFn::constant(*v),
                fidelity: Fidelity::Exact,
                stable: 0,
            }),
            Expr::Add(a, b) => {
                let (ta, tb) = (a.tail()?, b.tail()?);
                // An upper bound survives addition (monotone in each slot).
                Some(TailInfo {
                    r: ta.r.add(&tb.r),
                    fidelity: join(ta.fidelity, tb.fidelity),
                    stable: ta.stable.max(tb.stable),
                })
            }
            Expr::Sub(a, b) => {
                let (ta, tb) = (a.tail()?, b.tail()?);
                // Subtracting an upper bound gives neither a value nor a bound.
                if tb.fidelity == Fidelity::UpperBound {
                    return None;
                }
                Some(TailInfo {
                    r: ta.r.sub(&tb.r),
                    fidelity: ta.fidelity,
                    stable: ta.stable.max(tb.stable),
                })
            }
            Expr::Mul(a, b) => {
                let (ta, tb) = (a.tail()?, b.tail()?);
                let fid = join(ta.fidelity, tb.fidelity);
                if fid == Fidelity::UpperBound {
                    // keep the bound only when the exact factor stays >= 0
                    let exact_side = if ta.fidelity == Fidelity::Exact {
                        &ta
                    } else {
                        &tb
                    };
                    if exact_side.r.eventual_sign() < 0 {
                        return None;
                    }
                }
                let r = ta.r.mul(&tb.r);
                let stable = ta.stable.max(tb.stable).max(r.stable_from());
                Some(TailInfo {
                    r,
                    fidelity: fid,
                    stable,
                })
            }
            Expr::Div(a, b) => {
                let (ta, tb) = (a.tail()?, b.tail()?);
                if tb.fidelity == Fidelity::UpperBound {
                    return None;
                }
                if tb.r.eventual_sign() == 0 {
                    return None;
                }
                if ta.fidelity == Fidelity::UpperBound && tb.r.eventual_sign() < 0 {
                    return None;
                }
                let r = ta.r.div(&tb.r).ok()?;
                let stable = ta.stable.max(tb.stable).max(r.stable_from());
                Some(TailInfo {
                    r,
                    fidelity: ta.fidelity,
                    stable,
                })
            }
            Expr::Abs(a) => abs_tail(&a.tail()?),
            Expr::Max(a, b) => {
                let (ta, tb) = (a.tail()?, b.tail()?);
                if ta.fidelity == Fidelity::UpperBound || tb.fidelity == Fidelity::UpperBound {
                    return None;
                }
                let diff = ta.r.sub(&tb.r);
                let pick = if diff.eventual_sign() >= 0 { &ta } else { &tb };
                let stable = ta.stable.max(tb.stable).max(diff.stable_from());
                Some(TailInfo {
                    r: pick.r.clone(),
                    fidelity: Fidelity::Exact,
                    stable,
                })
            }
        }
    }
}

fn join(a: Fidelity, b: Fidelity) -> Fidelity {
    if a == Fidelity::Exact && b == Fidelity::Exact {
        Fidelity::Exact
    } else {
        Fidelity::UpperBound
    }
}

fn abs_tail(t: &TailInfo) -> Option<TailInfo> {
    if t.fidelity == Fidelity::UpperBound {
        return None;
    }
    let r = match t.r.eventual_sign() {
        0 | 1 => t.r.clone(),
        _ => t.r.neg(),
    };
    Some(TailInfo {
        stable: t.stable.max(r.stable_from()),
        r,
        fidelity: Fidelity::Exact,
    })
}

// ---------------------------------------------------------------------------
// Conditions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Ineq {
    Le,
    Lt,
    Ge,
    Gt,
}

#[derive(Debug, Clone)]
pub(crate) enum Cond {
    /// `expr(k) ⋈ bound` for every k.
    ForAll {
        id: String,
        expr: Expr,
        ineq: Ineq,
        bound: f64,
    },
    /// `Σ expr < ∞` (expr is a nonnegative magnitude by construction).
    SumFinite {
        id: String,
        expr: Expr,
    },
    /// `Σ expr = ∞`.
    SumInfinite {
        id: String,
        expr: Expr,
    },
    /// `expr → limit`.
    LimitIs {
        id: String,
        expr: Expr,
        limit: Limit,
    },
    /// `liminf expr > bound`.
    LiminfGt {
        id: String,
        expr: Expr,
        bound: f64,
    },
    /// `limsup expr < bound`.
    LimsupLt {
        id: String,
        expr: Expr,
        bound: f64,
    },
    /// `inf_k expr > bound` (pointwise plus asymptotic).
    InfGt {
        id: String,
        expr: Expr,
        bound: f64,
    },
    /// `sup_k expr < ∞`.
    SupFinite {
        id: String,
        expr: Expr,
    },
    /// The schedule's anchor is the origin.
    AnchorIsZero {
        id: String,
    },
    AllOf {
        id: String,
        items: Vec<Cond>,
    },
    AnyOf {
        id: String,
        items: Vec<Cond>,
    },
}

struct Ctx<'a> {
    horizon: u64,
    schedule: &'a ParameterSchedule,
}

impl Cond {
    fn id(&self) -> &str {
        match self {
            Cond::ForAll { id, .. }
            | Cond::SumFinite { id, .. }
            | Cond::SumInfinite { id, .. }
            | Cond::LimitIs { id, .. }
            | Cond::LiminfGt { id, .. }
            | Cond::LimsupLt { id, .. }
            | Cond::InfGt { id, .. }
            | Cond::SupFinite { id, .. }
            | Cond::AnchorIsZero { id }
            | Cond::AllOf { id, .. }
            | Cond::AnyOf { id, .. } => id,
        }
    }

    fn check(&self, ctx: &Ctx, out: &mut Vec<ConditionEvidence>) -> Verdict {
        match self {
            Cond::AllOf { id, items } => {
                let mut verdict = Verdict::Holds;
                let mut witness = None;
                for item in items {
                    let v = item.check(ctx, out);
                    match v {
                        Verdict::Fails { witness: w } => {
                            if !verdict.fails() {
                                witness = w;
                            }
                            verdict = Verdict::Fails { witness };
                        }
                        Verdict::Undecided if verdict.holds() => verdict = Verdict::Undecided,
                        _ => {}
                    }
                }
                out.push(ConditionEvidence {
                    condition: id.clone(),
                    verdict: verdict.clone(),
                    tag: Tag::RuleDerived,
                    detail: "conjunction of the conditions above".into(),
                });
                verdict
            }
            Cond::AnyOf { id, items } => {
                let mut verdict = Verdict::Fails { witness: None };
                let mut satisfied: Option<&str> = None;
                for item in items {
                    let v = item.check(ctx, out);
                    match v {
                        Verdict::Holds => {
                            if satisfied.is_none() {
                                satisfied = Some(item.id());
                            }
                            verdict = Verdict::Holds;
                        }
                        Verdict::Undecided => {
                            if !verdict.holds() {
                                verdict = Verdict::Undecided;
                            }
                        }
                        Verdict::Fails { witness } => {
                            if let Verdict::Fails { witness: w } = &mut verdict {
                                if w.is_none() {
                                    *w = witness;
                                }
                            }
                        }
                    }
                }
                out.push(ConditionEvidence {
                    condition: id.clone(),
                    verdict: verdict.clone(),
                    tag: Tag::RuleDerived,
                    detail: match satisfied {
                        Some(branch) => format!("certified by branch: {branch}"),
                        None => "no branch certified".into(),
                    },
                });
                verdict
            }
            Cond::AnchorIsZero { id } => {
                let ok = ctx.schedule.anchor.norm() == 0.0;
                let verdict = if ok {
                    Verdict::Holds
                } else {
                    Verdict::Fails { witness: None }
                };
                out.push(ConditionEvidence {
                    condition: id.clone(),
                    verdict: verdict.clone(),
                    tag: Tag::RuleDerived,
                    detail: format!("‖u‖ = {:e}", ctx.schedule.anchor.norm()),
                });
                verdict
            }
            _ => {
                let (verdict, tag, detail) = self.check_leaf(ctx);
                out.push(ConditionEvidence {
                    condition: self.id().to_string(),
                    verdict: verdict.clone(),
                    tag,
                    detail,
                });
                verdict
            }
        }
    }

    fn check_leaf(&self, ctx: &Ctx) -> (Verdict, Tag, String) {
        match self {
            Cond::ForAll {
                expr, ineq, bound, ..
            } => check_forall(ctx, expr, *ineq, *bound),
            Cond::SumFinite { id, expr } => check_sum(ctx, id, expr, true),
            Cond::SumInfinite { id, expr } => check_sum(ctx, id, expr, false),
            Cond::LimitIs { expr, limit, .. } => check_limit(ctx, expr, *limit),
            Cond::LiminfGt { expr, bound, .. } => check_lim_window(ctx, expr, *bound, true),
            Cond::LimsupLt { expr, bound, .. } => check_lim_window(ctx, expr, *bound, false),
            Cond::InfGt { expr, bound, .. } => check_inf(ctx, expr, *bound),
            Cond::SupFinite { expr, .. } => check_sup(ctx, expr),
            _ => unreachable!("composite handled in check()"),
        }
    }
}

fn scan_end(ctx: &Ctx, stable: u64) -> u64 {
    ctx.horizon.max(stable).min(SCAN_CAP)
}

fn check_forall(ctx: &Ctx, expr: &Expr, ineq: Ineq, bound: f64) -> (Verdict, Tag, String) {
    let tail = expr.tail();
    let stable = tail.as_ref().map_or(0, |t| t.stable);
    let end = scan_end(ctx, stable);
    // Exact equality cases ("≤ 1" met with equality) evaluate a few ulps off
    // in floating point; the scan tolerates that, the symbolic tail is exact.
    let slack = 1e-12 * (1.0 + bound.abs());
    // A strict bound attained exactly (gap identically zero) never holds.
    if matches!(ineq, Ineq::Lt | Ineq::Gt) {
        if let Some(t) = &tail {
            let gap = t.r.sub(&RationalFn::constant(bound));
            if gap.is_zero() && t.fidelity == Fidelity::Exact {
                return (
                    Verdict::Fails {
                        witness: Some(t.stable),
                    },
                    Tag::RuleDerived,
                    format!("the sequence equals the strict bound {bound} identically"),
                );
            }
        }
    }
    for k in 0..=end {
        let v = match expr.eval(k) {
            Ok(v) => v,
            Err(e) => {
                return (
                    Verdict::Undecided,
                    Tag::FiniteHorizon,
                    format!("evaluation failed: {e}"),
                )
            }
        };
        let scaled = slack * (1.0 + v.abs());
        let ok = match ineq {
            Ineq::Le => v <= bound + scaled,
            Ineq::Lt => v < bound,
            Ineq::Ge => v >= bound - scaled,
            Ineq::Gt => v > bound,
        };
        if !ok {
            return (
                Verdict::Fails { witness: Some(k) },
                Tag::RuleDerived,
                format!("value {v} at k = {k} violates the bound {bound}"),
            );
        }
    }
    // Tail certificate: sign of (bound − expr) or (expr − bound).
    let Some(t) = tail else {
        return (
            Verdict::Undecided,
            Tag::FiniteHorizon,
            format!("holds for k ≤ {end}; no tail rational available"),
        );
    };
    if t.stable > end {
        return (
            Verdict::Undecided,
            Tag::FiniteHorizon,
            format!("holds for k ≤ {end}; tail stabilizes only at {}", t.stable),
        );
    }
    let gap = match ineq {
        Ineq::Le | Ineq::Lt => RationalFn::constant(bound).sub(&t.r),
        Ineq::Ge | Ineq::Gt => t.r.sub(&RationalFn::constant(bound)),
    };
    let sign = gap.eventual_sign();
    let strict = matches!(ineq, Ineq::Lt | Ineq::Gt);
    // An upper bound on expr still certifies Le/Lt; it cannot certify Ge/Gt.
    if t.fidelity == Fidelity::UpperBound && matches!(ineq, Ineq::Ge | Ineq::Gt) {
        return (
            Verdict::Undecided,
            Tag::FiniteHorizon,
            format!("holds for k ≤ {end}; only an upper bound is known"),
        );
    }
    let ok = if strict { sign > 0 } else { sign >= 0 };
    if ok {
        (
            Verdict::Holds,
            Tag::RuleDerived,
            format!("scanned k ≤ {end}; tail certified symbolically"),
        )
    } else {
        // The scan covered the stability index, so this cannot trigger for a
        // clean scan; keep a conservative fallback.
        (
            Verdict::Undecided,
            Tag::FiniteHorizon,
            format!("holds for k ≤ {end} but the tail sign is inconclusive"),
        )
    }
}

fn check_sum(ctx: &Ctx, id: &str, expr: &Expr, want_finite: bool) -> (Verdict, Tag, String) {
    if let Some(t) = expr.tail() {
        let summable = t.r.abs_summable();
        let sign = t.r.eventual_sign();
        match (want_finite, summable, t.fidelity) {
            (true, true, _) => {
                return (
                    Verdict::Holds,
                    Tag::RuleDerived,
                    format!("degree gap {} ≥ 2", t.r.degree_gap()),
                );
            }
            (true, false, Fidelity::Exact) => {
                return (
                    Verdict::Fails { witness: None },
                    Tag::RuleDerived,
                    format!(
                        "terms decay only like degree gap {}; partial sum at K: {:e}",
                        t.r.degree_gap(),
                        partial_sum(expr, ctx.horizon)
                    ),
                );
            }
            (false, true, _) => {
                return (
                    Verdict::Fails { witness: None },
                    Tag::RuleDerived,
                    "series converges, so it cannot diverge to ∞".into(),
                );
            }
            (false, false, Fidelity::Exact) => {
                if sign > 0 {
                    return (
                        Verdict::Holds,
                        Tag::RuleDerived,
                        format!("eventually positive with degree gap {}", t.r.degree_gap()),
                    );
                }
                return (
                    Verdict::Fails { witness: None },
                    Tag::RuleDerived,
                    "terms are eventually nonpositive".into(),
                );
            }
            (_, _, Fidelity::UpperBound) => {} // fall through to declarations
        }
    }
    if let Some(claim) = user_claim(ctx, id) {
        let verdict = match (want_finite, claim) {
            (true, SummabilityClaim::Summable) => Verdict::Holds,
            (true, SummabilityClaim::DivergentSum) => Verdict::Fails { witness: None },
            (false, SummabilityClaim::DivergentSum) => Verdict::Holds,
            (false, SummabilityClaim::Summable) => Verdict::Fails { witness: None },
            _ => Verdict::Undecided,
        };
        return (verdict, Tag::UserDeclared, format!("declared {:?}", claim));
    }
    (
        Verdict::Undecided,
        Tag::FiniteHorizon,
        format!(
            "partial sum at K = {}: {:e}",
            ctx.horizon,
            partial_sum(expr, ctx.horizon)
        ),
    )
}

fn partial_sum(expr: &Expr, upto: u64) -> f64 {
    // Kahan-compensated; these sums back Undecided evidence and diagnostics.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for k in 0..=upto {
        let Ok(v) = expr.eval(k) else { return f64::NAN };
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

fn check_limit(ctx: &Ctx, expr: &Expr, target: Limit) -> (Verdict, Tag, String) {
    if let Some(t) = expr.tail() {
        let l = t.r.limit();
        let matches = match (l, target) {
            (Limit::Finite(a), Limit::Finite(b)) => (a - b).abs() <= LIMIT_EPS * (1.0 + b.abs()),
            (Limit::PlusInfinity, Limit::PlusInfinity) => true,
            (Limit::MinusInfinity, Limit::MinusInfinity) => true,
            _ => false,
        };
        if t.fidelity == Fidelity::Exact {
            return if matches {
                (
                    Verdict::Holds,
                    Tag::RuleDerived,
                    format!("symbolic limit {l:?}"),
                )
            } else {
                (
                    Verdict::Fails { witness: None },
                    Tag::RuleDerived,
                    format!("symbolic limit {l:?}, required {target:?}"),
                )
            };
        }
        // Upper bound: a bound tending to 0 certifies decay to 0.
        if target == Limit::Finite(0.0) && l == Limit::Finite(0.0) {
            return (
                Verdict::Holds,
                Tag::RuleDerived,
                "upper bound tends to 0".into(),
            );
        }
    }
    (
        Verdict::Undecided,
        Tag::FiniteHorizon,
        tail_window_estimate(ctx, expr),
    )
}

fn check_lim_window(ctx: &Ctx, expr: &Expr, bound: f64, is_liminf: bool) -> (Verdict, Tag, String) {
    // liminf = limsup = limit for rational tails; never certified numerically.
    if let Some(t) = expr.tail() {
        if t.fidelity == Fidelity::Exact {
            let l = t.r.limit();
            let verdict = match (l, is_liminf) {
                (Limit::PlusInfinity, true) => Verdict::Holds,
                (Limit::PlusInfinity, false) => Verdict::Fails { witness: None },
                (Limit::MinusInfinity, true) => Verdict::Fails { witness: None },
                (Limit::MinusInfinity, false) => Verdict::Holds,
                (Limit::Finite(v), true) => {
                    if v > bound + LIMIT_EPS {
                        Verdict::Holds
                    } else {
                        Verdict::Fails { witness: None }
                    }
                }
                (Limit::Finite(v), false) => {
                    if v < bound - LIMIT_EPS {
                        Verdict::Holds
                    } else {
                        Verdict::Fails { witness: None }
                    }
                }
            };
            return (verdict, Tag::RuleDerived, format!("symbolic limit {l:?}"));
        }
    }
    (
        Verdict::Undecided,
        Tag::FiniteHorizon,
        tail_window_estimate(ctx, expr),
    )
}

fn check_inf(ctx: &Ctx, expr: &Expr, bound: f64) -> (Verdict, Tag, String) {
    let tail = expr.tail();
    let stable = tail.as_ref().map_or(0, |t| t.stable);
    let end = scan_end(ctx, stable);
    for k in 0..=end {
        match expr.eval(k) {
            Ok(v) if v > bound => {}
            Ok(v) => {
                return (
                    Verdict::Fails { witness: Some(k) },
                    Tag::RuleDerived,
                    format!("value {v} at k = {k} is not above {bound}"),
                )
            }
            Err(e) => {
                return (
                    Verdict::Undecided,
                    Tag::FiniteHorizon,
                    format!("evaluation failed: {e}"),
                )
            }
        }
    }
    match tail {
        Some(t) if t.fidelity == Fidelity::Exact => match t.r.limit() {
            Limit::PlusInfinity => (Verdict::Holds, Tag::RuleDerived, "tail grows".into()),
            Limit::Finite(v) if v > bound + LIMIT_EPS => (
                Verdict::Holds,
                Tag::RuleDerived,
                format!("positive on k ≤ {end}, limit {v}"),
            ),
            l => (
                Verdict::Fails { witness: None },
                Tag::RuleDerived,
                format!("infimum approaches {l:?}"),
            ),
        },
        _ => (
            Verdict::Undecided,
            Tag::FiniteHorizon,
            format!("above {bound} for k ≤ {end}; tail unknown"),
        ),
    }
}

fn check_sup(ctx: &Ctx, expr: &Expr) -> (Verdict, Tag, String) {
    match expr.tail() {
        // An upper bound with a finite limit still bounds the sequence.
        Some(t) => match t.r.limit() {
            Limit::Finite(_) => {
                let end = scan_end(ctx, t.stable);
                let mut sup = f64::NEG_INFINITY;
                for k in 0..=end {
                    match expr.eval(k) {
                        Ok(v) => sup = sup.max(v),
                        Err(e) => {
                            return (
                                Verdict::Undecided,
                                Tag::FiniteHorizon,
                                format!("evaluation failed: {e}"),
                            )
                        }
                    }
                }
                (
                    Verdict::Holds,
                    Tag::RuleDerived,
                    format!("sup over k ≤ {end} is {sup:e}; tail converges"),
                )
            }
            l => (
                Verdict::Fails { witness: None },
                Tag::RuleDerived,
                format!("sequence diverges ({l:?})"),
            ),
        },
        None => {
            if let Some(claim) = user_claim(ctx, "sup") {
                if claim == SummabilityClaim::Bounded {
                    return (Verdict::Holds, Tag::UserDeclared, "declared bounded".into());
                }
            }
            (
                Verdict::Undecided,
                Tag::FiniteHorizon,
                tail_window_estimate(ctx, expr),
            )
        }
    }
}

fn tail_window_estimate(ctx: &Ctx, expr: &Expr) -> String {
    let lo = ctx.horizon / 2;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    let mut n = 0u64;
    let mut k = lo;
    let step = ((ctx.horizon - lo) / 512).max(1);
    while k <= ctx.horizon {
        if let Ok(v) = expr.eval(k) {
            min = min.min(v);
            max = max.max(v);
            sum += v;
            n += 1;
        }
        k += step;
    }
    if n == 0 {
        return "no tail samples available".into();
    }
    format!(
        "tail window [{lo}, {}]: min {min:e}, max {max:e}, mean {:e}",
        ctx.horizon,
        sum / n as f64
    )
}

fn user_claim(ctx: &Ctx, id: &str) -> Option<SummabilityClaim> {
    ctx.schedule
        .declared
        .iter()
        .find(|d| d.expr == id)
        .map(|d| d.claim)
}

// ---------------------------------------------------------------------------
// Named expressions and theorem bundles
// ---------------------------------------------------------------------------

struct Parts {
    alpha: Expr,
    beta: Expr,
    gamma: Expr,
    delta: Expr,
    c: Expr,
    /// ξ_k = |β + γ/2| + |γ/2|
    xi: Expr,
    /// η_k = 1 − β − γ/2
    eta: Expr,
    /// φ_k = 1 − β − γ
    phi: Expr,
    /// 1 − α − β − γ
    varphi: Expr,
    /// ‖e_k‖
    err: Expr,
    /// ‖δ_k e_k‖
    delta_err: Expr,
}

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

fn parts(s: &ParameterSchedule) -> Parts {
    let alpha = Expr::rule(&s.alpha);
    let beta = Expr::rule(&s.beta);
    let gamma = Expr::rule(&s.gamma);
    let delta = Expr::rule(&s.delta);
    let c = Expr::rule(&s.c);
    let half_gamma = Expr::Mul(b(Expr::Const(0.5)), b(gamma.clone()));
    let xi = Expr::Add(
        b(Expr::Abs(b(Expr::Add(
            b(beta.clone()),
            b(half_gamma.clone()),
        )))),
        b(Expr::Abs(b(half_gamma.clone()))),
    );
    let eta = Expr::Sub(
        b(Expr::Sub(b(Expr::Const(1.0)), b(beta.clone()))),
        b(half_gamma),
    );
    let phi = Expr::Sub(
        b(Expr::Const(1.0)),
        b(Expr::Add(b(beta.clone()), b(gamma.clone()))),
    );
    let varphi = Expr::Sub(b(phi.clone()), b(alpha.clone()));
    let (err_rule, exact) = s.error.norm_rule();
    let err = Expr::ErrorNorm {
        rule: err_rule,
        exact,
    };
    let delta_err = Expr::Mul(b(Expr::Abs(b(delta.clone()))), b(err.clone()));
    Parts {
        alpha,
        beta,
        gamma,
        delta,
        c,
        xi,
        eta,
        phi,
        varphi,
        err,
        delta_err,
    }
}

impl Parts {
    fn abs_alpha(&self) -> Expr {
        Expr::Abs(b(self.alpha.clone()))
    }
    fn abs_beta(&self) -> Expr {
        Expr::Abs(b(self.beta.clone()))
    }
    fn abs_gamma(&self) -> Expr {
        Expr::Abs(b(self.gamma.clone()))
    }
    /// γ(β+γ)
    fn gamma_bg(&self) -> Expr {
        Expr::Mul(
            b(self.gamma.clone()),
            b(Expr::Add(b(self.beta.clone()), b(self.gamma.clone()))),
        )
    }
    /// γ(2β+γ)
    fn gamma_2bg(&self) -> Expr {
        Expr::Mul(
            b(self.gamma.clone()),
            b(Expr::Add(
                b(Expr::Mul(b(Expr::Const(2.0)), b(self.beta.clone()))),
                b(self.gamma.clone()),
            )),
        )
    }
    /// 1 − ξ²
    fn one_minus_xi_sq(&self) -> Expr {
        Expr::Sub(
            b(Expr::Const(1.0)),
            b(Expr::Mul(b(self.xi.clone()), b(self.xi.clone()))),
        )
    }
    /// |β+γ|·|γ| − max{1−|β|, 2−2|β+γ/2|}
    fn cross_bound_defect(&self) -> Expr {
        let bg = Expr::Abs(b(Expr::Add(b(self.beta.clone()), b(self.gamma.clone()))));
        let lhs = Expr::Mul(b(bg), b(self.abs_gamma()));
        let m1 = Expr::Sub(b(Expr::Const(1.0)), b(self.abs_beta()));
        let m2 = Expr::Sub(
            b(Expr::Const(2.0)),
            b(Expr::Mul(
                b(Expr::Const(2.0)),
                b(Expr::Abs(b(Expr::Add(
                    b(self.beta.clone()),
                    b(Expr::Mul(b(Expr::Const(0.5)), b(self.gamma.clone()))),
                )))),
            )),
        );
        Expr::Sub(b(lhs), b(Expr::Max(b(m1), b(m2))))
    }
}

fn stepsize_floor_or_growth(p: &Parts) -> Cond {
    Cond::AnyOf {
        id: "inf c_k > 0 or c_k → ∞".into(),
        items: vec![
            Cond::InfGt {
                id: "inf c_k > 0".into(),
                expr: p.c.clone(),
                bound: 0.0,
            },
            Cond::LimitIs {
                id: "c_k → ∞".into(),
                expr: p.c.clone(),
                limit: Limit::PlusInfinity,
            },
        ],
    }
}

fn stepsize_floor_and_variation(s: &ParameterSchedule, p: &Parts) -> Vec<Cond> {
    let dc = Expr::Abs(b(Expr::Sub(
        b(Expr::rule(&s.c.shift_forward())),
        b(p.c.clone()),
    )));
    vec![
        Cond::InfGt {
            id: "inf c_k > 0".into(),
            expr: p.c.clone(),
            bound: 0.0,
        },
        Cond::SumFinite {
            id: "Σ |c_{k+1} − c_k| < ∞".into(),
            expr: dc,
        },
    ]
}

fn stepsize_ratio_to_zero(s: &ParameterSchedule, p: &Parts) -> Cond {
    let ratio = Expr::Div(b(p.c.clone()), b(Expr::rule(&s.c.shift_forward())));
    Cond::LimitIs {
        id: "1 − c_k/c_{k+1} → 0".into(),
        expr: Expr::Sub(b(Expr::Const(1.0)), b(ratio)),
        limit: Limit::Finite(0.0),
    }
}

fn summable_core(p: &Parts) -> Vec<Cond> {
    vec![
        Cond::ForAll {
            id: "|β+γ/2| + |γ/2| ≤ 1".into(),
            expr: p.xi.clone(),
            ineq: Ineq::Le,
            bound: 1.0,
        },
        Cond::SumFinite {
            id: "Σ |α_k| < ∞".into(),
            expr: p.abs_alpha(),
        },
        Cond::SumFinite {
            id: "Σ |1−β_k−γ_k| < ∞".into(),
            expr: Expr::Abs(b(p.phi.clone())),
        },
        Cond::SumFinite {
            id: "Σ ‖δ_k e_k‖ < ∞".into(),
            expr: p.delta_err.clone(),
        },
    ]
}

fn eta_window(p: &Parts) -> Vec<Cond> {
    vec![
        Cond::LimsupLt {
            id: "limsup |β_k| < 1".into(),
            expr: p.abs_beta(),
            bound: 1.0,
        },
        Cond::LiminfGt {
            id: "liminf (1−β−γ/2) > 0".into(),
            expr: p.eta.clone(),
            bound: 0.0,
        },
        Cond::LimsupLt {
            id: "limsup (1−β−γ/2) < 1".into(),
            expr: p.eta.clone(),
            bound: 1.0,
        },
    ]
}

fn bundle(theorem: TheoremId, s: &ParameterSchedule) -> Cond {
    let p = parts(s);
    match theorem {
        TheoremId::BoundednessSummable => {
            let mut items = summable_core(&p);
            let v1 = Cond::AllOf {
                id: "variant (i): γ_k → 1".into(),
                items: vec![
                    Cond::LimitIs {
                        id: "γ_k → 1".into(),
                        expr: p.gamma.clone(),
                        limit: Limit::Finite(1.0),
                    },
                    stepsize_floor_or_growth(&p),
                ],
            };
            let v2 = Cond::AllOf {
                id: "variant (ii): liminf γ(2β+γ) > 0".into(),
                items: vec![
                    Cond::ForAll {
                        id: "γ(β+γ) ≥ 0".into(),
                        expr: p.gamma_bg(),
                        ineq: Ineq::Ge,
                        bound: 0.0,
                    },
                    Cond::LiminfGt {
                        id: "liminf γ(2β+γ) > 0".into(),
                        expr: p.gamma_2bg(),
                        bound: 0.0,
                    },
                    stepsize_floor_or_growth(&p),
                    Cond::LiminfGt {
                        id: "liminf |γ_k| > 0".into(),
                        expr: p.abs_gamma(),
                        bound: 0.0,
                    },
                    Cond::SupFinite {
                        id: "sup |β_k| < ∞".into(),
                        expr: p.abs_beta(),
                    },
                ],
            };
            let mut v3_items = vec![
                Cond::ForAll {
                    id: "γ(β+γ) ≥ 0".into(),
                    expr: p.gamma_bg(),
                    ineq: Ineq::Ge,
                    bound: 0.0,
                },
                Cond::ForAll {
                    id: "γ(2β+γ) ≥ 0".into(),
                    expr: p.gamma_2bg(),
                    ineq: Ineq::Ge,
                    bound: 0.0,
                },
                Cond::ForAll {
                    id: "|β+γ||γ| ≤ max{1−|β|, 2−2|β+γ/2|}".into(),
                    expr: p.cross_bound_defect(),
                    ineq: Ineq::Le,
                    bound: 0.0,
                },
                Cond::SumInfinite {
                    id: "Σ γ(2β+γ) = ∞".into(),
                    expr: p.gamma_2bg(),
                },
                Cond::LiminfGt {
                    id: "liminf |γ_k| > 0".into(),
                    expr: p.abs_gamma(),
                    bound: 0.0,
                },
                Cond::SupFinite {
                    id: "sup |β_k| < ∞".into(),
                    expr: p.abs_beta(),
                },
            ];
            v3_items.extend(stepsize_floor_and_variation(s, &p));
            let v3 = Cond::AllOf {
                id: "variant (iii): Σ γ(2β+γ) = ∞".into(),
                items: v3_items,
            };
            items.push(Cond::AnyOf {
                id: "one of variants (i)–(iii)".into(),
                items: vec![v1, v2, v3],
            });
            Cond::AllOf {
                id: "boundedness-summable".into(),
                items,
            }
        }
        TheoremId::BoundednessFamilies => {
            let fam1 = Cond::AllOf {
                id: "family (I): limsup contraction < 1".into(),
                items: vec![
                    Cond::LimsupLt {
                        id: "limsup (|β+γ/2|+|γ/2|) < 1".into(),
                        expr: p.xi.clone(),
                        bound: 1.0,
                    },
                    Cond::SupFinite {
                        id: "sup |α_k| < ∞".into(),
                        expr: p.abs_alpha(),
                    },
                    Cond::SupFinite {
                        id: "sup ‖δ_k e_k‖ < ∞".into(),
                        expr: p.delta_err.clone(),
                    },
                ],
            };
            let fam2 = Cond::AllOf {
                id: "family (II): contraction ≤ 1 with compensations".into(),
                items: vec![
                    Cond::ForAll {
                        id: "|β+γ/2| + |γ/2| ≤ 1".into(),
                        expr: p.xi.clone(),
                        ineq: Ineq::Le,
                        bound: 1.0,
                    },
                    Cond::AnyOf {
                        id: "(a) |α| + contraction ≤ 1 or Σ|α| < ∞".into(),
                        items: vec![
                            Cond::ForAll {
                                id: "|α| + |β+γ/2| + |γ/2| ≤ 1".into(),
                                expr: Expr::Add(b(p.abs_alpha()), b(p.xi.clone())),
                                ineq: Ineq::Le,
                                bound: 1.0,
                            },
                            Cond::SumFinite {
                                id: "Σ |α_k| < ∞".into(),
                                expr: p.abs_alpha(),
                            },
                        ],
                    },
                    Cond::AnyOf {
                        id: "(b) [contraction + |δ| ≤ 1 and sup ‖e‖ < ∞] or Σ‖δe‖ < ∞".into(),
                        items: vec![
                            Cond::AllOf {
                                id: "contraction + |δ| ≤ 1 and sup ‖e‖ < ∞".into(),
                                items: vec![
                                    Cond::ForAll {
                                        id: "|β+γ/2| + |γ/2| + |δ| ≤ 1".into(),
                                        expr: Expr::Add(
                                            b(p.xi.clone()),
                                            b(Expr::Abs(b(p.delta.clone()))),
                                        ),
                                        ineq: Ineq::Le,
                                        bound: 1.0,
                                    },
                                    Cond::SupFinite {
                                        id: "sup ‖e_k‖ < ∞".into(),
                                        expr: p.err.clone(),
                                    },
                                ],
                            },
                            Cond::SumFinite {
                                id: "Σ ‖δ_k e_k‖ < ∞".into(),
                                expr: p.delta_err.clone(),
                            },
                        ],
                    },
                    Cond::AnyOf {
                        id: "(c) contraction + |1−β−γ| ≤ 1 or Σ|1−β−γ| < ∞".into(),
                        items: vec![
                            Cond::ForAll {
                                id: "|β+γ/2| + |γ/2| + |1−β−γ| ≤ 1".into(),
                                expr: Expr::Add(b(p.xi.clone()), b(Expr::Abs(b(p.phi.clone())))),
                                ineq: Ineq::Le,
                                bound: 1.0,
                            },
                            Cond::SumFinite {
                                id: "Σ |1−β_k−γ_k| < ∞".into(),
                                expr: Expr::Abs(b(p.phi.clone())),
                            },
                        ],
                    },
                ],
            };
            let fam3 = Cond::AllOf {
                id: "family (III): |α| + contraction ≤ 1 with summable defect".into(),
                items: vec![
                    Cond::ForAll {
                        id: "|α| + |β+γ/2| + |γ/2| ≤ 1".into(),
                        expr: Expr::Add(b(p.abs_alpha()), b(p.xi.clone())),
                        ineq: Ineq::Le,
                        bound: 1.0,
                    },
                    Cond::SumFinite {
                        id: "Σ |1−α−β−γ| < ∞".into(),
                        expr: Expr::Abs(b(p.varphi.clone())),
                    },
                    Cond::SumFinite {
                        id: "Σ ‖δ_k e_k‖ < ∞".into(),
                        expr: p.delta_err.clone(),
                    },
                ],
            };
            let fam4 = Cond::AllOf {
                id: "family (IV): contraction + |δ| ≤ 1 with summable δ-defect".into(),
                items: vec![
                    Cond::SupFinite {
                        id: "sup ‖e_k‖ < ∞".into(),
                        expr: p.err.clone(),
                    },
                    Cond::SumFinite {
                        id: "Σ |α_k| < ∞".into(),
                        expr: p.abs_alpha(),
                    },
                    Cond::SumFinite {
                        id: "Σ |1−β−γ−δ| < ∞".into(),
                        expr: Expr::Abs(b(Expr::Sub(b(p.phi.clone()), b(p.delta.clone())))),
                    },
                    Cond::ForAll {
                        id: "|β+γ/2| + |γ/2| + |δ| ≤ 1".into(),
                        expr: Expr::Add(b(p.xi.clone()), b(Expr::Abs(b(p.delta.clone())))),
                        ineq: Ineq::Le,
                        bound: 1.0,
                    },
                ],
            };
            let fam5 = Cond::AllOf {
                id: "family (V): anchored with vanishing relative errors".into(),
                items: vec![
                    Cond::ForAll {
                        id: "α_k > 0".into(),
                        expr: p.alpha.clone(),
                        ineq: Ineq::Gt,
                        bound: 0.0,
                    },
                    Cond::ForAll {
                        id: "α_k ≤ 1".into(),
                        expr: p.alpha.clone(),
                        ineq: Ineq::Le,
                        bound: 1.0,
                    },
                    Cond::ForAll {
                        id: "α + |β+γ/2| + |γ/2| ≤ 1".into(),
                        expr: Expr::Add(b(p.alpha.clone()), b(p.xi.clone())),
                        ineq: Ineq::Le,
                        bound: 1.0,
                    },
                    Cond::LimitIs {
                        id: "‖δ_k e_k‖/α_k → 0".into(),
                        expr: Expr::Div(b(p.delta_err.clone()), b(p.alpha.clone())),
                        limit: Limit::Finite(0.0),
                    },
                    Cond::LimitIs {
                        id: "|1−α−β−γ|/α_k → 0".into(),
                        expr: Expr::Div(b(Expr::Abs(b(p.varphi.clone()))), b(p.alpha.clone())),
                        limit: Limit::Finite(0.0),
                    },
                ],
            };
            let tail_a = Cond::AllOf {
                id: "equivalence tail (a): c_k → ∞ with γ_k → 1".into(),
                items: vec![
                    Cond::LimitIs {
                        id: "c_k → ∞".into(),
                        expr: p.c.clone(),
                        limit: Limit::PlusInfinity,
                    },
                    Cond::LimitIs {
                        id: "α_k → 0".into(),
                        expr: p.alpha.clone(),
                        limit: Limit::Finite(0.0),
                    },
                    Cond::LimitIs {
                        id: "β_k → 0".into(),
                        expr: p.beta.clone(),
                        limit: Limit::Finite(0.0),
                    },
                    Cond::LimitIs {
                        id: "γ_k → 1".into(),
                        expr: p.gamma.clone(),
                        limit: Limit::Finite(1.0),
                    },
                    Cond::LimitIs {
                        id: "‖δ_k e_k‖ → 0".into(),
                        expr: p.delta_err.clone(),
                        limit: Limit::Finite(0.0),
                    },
                ],
            };
            let mut tail_b_items = vec![
                Cond::ForAll {
                    id: "β_k + γ_k ≤ 1".into(),
                    expr: Expr::Add(b(p.beta.clone()), b(p.gamma.clone())),
                    ineq: Ineq::Le,
                    bound: 1.0,
                },
                Cond::LimitIs {
                    id: "α_k → 0".into(),
                    expr: p.alpha.clone(),
                    limit: Limit::Finite(0.0),
                },
                Cond::LimitIs {
                    id: "1−α−β−γ → 0".into(),
                    expr: p.varphi.clone(),
                    limit: Limit::Finite(0.0),
                },
                Cond::LimitIs {
                    id: "‖δ_k e_k‖ → 0".into(),
                    expr: p.delta_err.clone(),
                    limit: Limit::Finite(0.0),
                },
                stepsize_ratio_to_zero(s, &p),
                stepsize_floor_or_growth(&p),
            ];
            tail_b_items.extend(eta_window(&p));
            let tail_b = Cond::AllOf {
                id: "equivalence tail (b): averaged window".into(),
                items: tail_b_items,
            };
            let tail_c = {
                let alpha_shift = Expr::rule(&s.alpha.shift_forward());
                let gamma_shift = Expr::rule(&s.gamma.shift_forward());
                let da = Expr::Abs(b(Expr::Sub(b(alpha_shift.clone()), b(p.alpha.clone()))));
                let sum_ag = Expr::Add(b(p.alpha.clone()), b(p.gamma.clone()));
                let sum_ag_shift = Expr::Add(b(alpha_shift), b(gamma_shift.clone()));
                let dag = Expr::Abs(b(Expr::Sub(b(sum_ag_shift), b(sum_ag.clone()))));
                let mut items = vec![
                    Cond::AnyOf {
                        id: "Σ|α_{k+1}−α_k| < ∞ or |α_{k+1}−α_k|/(1−|γ_{k+1}|) → 0".into(),
                        items: vec![
                            Cond::SumFinite {
                                id: "Σ |α_{k+1}−α_k| < ∞".into(),
                                expr: da.clone(),
                            },
                            Cond::AllOf {
                                id: "|γ_k| < 1 and relative α-increments vanish".into(),
                                items: vec![
                                    Cond::ForAll {
                                        id: "|γ_k| < 1".into(),
                                        expr: p.abs_gamma(),
                                        ineq: Ineq::Lt,
                                        bound: 1.0,
                                    },
                                    Cond::LimitIs {
                                        id: "|α_{k+1}−α_k|/(1−|γ_{k+1}|) → 0".into(),
                                        expr: Expr::Div(
                                            b(da),
                                            b(Expr::Sub(
                                                b(Expr::Const(1.0)),
                                                b(Expr::Abs(b(gamma_shift))),
                                            )),
                                        ),
                                        limit: Limit::Finite(0.0),
                                    },
                                ],
                            },
                        ],
                    },
                    Cond::ForAll {
                        id: "|γ_k| ≤ 1".into(),
                        expr: p.abs_gamma(),
                        ineq: Ineq::Le,
                        bound: 1.0,
                    },
                    Cond::LimitIs {
                        id: "α_k → 0".into(),
                        expr: p.alpha.clone(),
                        limit: Limit::Finite(0.0),
                    },
                    Cond::LimitIs {
                        id: "α_k + γ_k → 1".into(),
                        expr: sum_ag,
                        limit: Limit::Finite(1.0),
                    },
                    Cond::SumFinite {
                        id: "Σ |(α+γ)_{k+1} − (α+γ)_k| < ∞".into(),
                        expr: dag,
                    },
                    Cond::SumFinite {
                        id: "Σ |β_k| < ∞".into(),
                        expr: p.abs_beta(),
                    },
                    Cond::SumInfinite {
                        id: "Σ (1−|γ_k|) = ∞".into(),
                        expr: Expr::Sub(b(Expr::Const(1.0)), b(p.abs_gamma())),
                    },
                    Cond::SumFinite {
                        id: "Σ ‖δ_k e_k‖ < ∞".into(),
                        expr: p.delta_err.clone(),
                    },
                ];
                items.extend(stepsize_floor_and_variation(s, &p));
                Cond::AllOf {
                    id: "equivalence tail (c): summable increments".into(),
                    items,
                }
            };
            Cond::AllOf {
                id: "boundedness-families".into(),
                items: vec![
                    Cond::AnyOf {
                        id: "one of families (I)–(V)".into(),
                        items: vec![fam1, fam2, fam3, fam4, fam5],
                    },
                    Cond::AnyOf {
                        id: "one of equivalence tails (a)–(c)".into(),
                        items: vec![tail_a, tail_b, tail_c],
                    },
                ],
            }
        }
        TheoremId::WeakConvergence => {
            let mut items = summable_core(&p);
            let v1 = Cond::AllOf {
                id: "variant (i): γ_k → 1".into(),
                items: vec![
                    Cond::LimitIs {
                        id: "γ_k → 1".into(),
                        expr: p.gamma.clone(),
                        limit: Limit::Finite(1.0),
                    },
                    stepsize_floor_or_growth(&p),
                ],
            };
            let mut v2_items = eta_window(&p);
            v2_items.push(stepsize_ratio_to_zero(s, &p));
            v2_items.push(stepsize_floor_or_growth(&p));
            let v2 = Cond::AllOf {
                id: "variant (ii): averaged window".into(),
                items: v2_items,
            };
            let v3 = Cond::AllOf {
                id: "variant (iii): liminf γ(2β+γ) > 0".into(),
                items: vec![
                    Cond::ForAll {
                        id: "γ(β+γ) ≥ 0".into(),
                        expr: p.gamma_bg(),
                        ineq: Ineq::Ge,
                        bound: 0.0,
                    },
                    Cond::LiminfGt {
                        id: "liminf γ(2β+γ) > 0".into(),
                        expr: p.gamma_2bg(),
                        bound: 0.0,
                    },
                    stepsize_floor_or_growth(&p),
                ],
            };
            let mut v4_items = vec![
                Cond::ForAll {
                    id: "γ(β+γ) ≥ 0".into(),
                    expr: p.gamma_bg(),
                    ineq: Ineq::Ge,
                    bound: 0.0,
                },
                Cond::ForAll {
                    id: "γ(2β+γ) ≥ 0".into(),
                    expr: p.gamma_2bg(),
                    ineq: Ineq::Ge,
                    bound: 0.0,
                },
                Cond::SumInfinite {
                    id: "Σ γ(2β+γ) = ∞".into(),
                    expr: p.gamma_2bg(),
                },
                Cond::ForAll {
                    id: "|β+γ||γ| ≤ max{1−|β|, 2−2|β+γ/2|}".into(),
                    expr: p.cross_bound_defect(),
                    ineq: Ineq::Le,
                    bound: 0.0,
                },
            ];
            v4_items.extend(stepsize_floor_and_variation(s, &p));
            let v4 = Cond::AllOf {
                id: "variant (iv): Σ γ(2β+γ) = ∞".into(),
                items: v4_items,
            };
            items.push(Cond::AnyOf {
                id: "one of variants (i)–(iv)".into(),
                items: vec![v1, v2, v3, v4],
            });
            Cond::AllOf {
                id: "weak-convergence".into(),
                items,
            }
        }
        TheoremId::StrongConvergence => {
            let pointwise = vec![
                Cond::ForAll {
                    id: "|α| + |β+γ/2| + |γ/2| ≤ 1".into(),
                    expr: Expr::Add(b(p.abs_alpha()), b(p.xi.clone())),
                    ineq: Ineq::Le,
                    bound: 1.0,
                },
                Cond::ForAll {
                    id: "β_k + γ_k ≥ 0".into(),
                    expr: Expr::Add(b(p.beta.clone()), b(p.gamma.clone())),
                    ineq: Ineq::Ge,
                    bound: 0.0,
                },
                Cond::ForAll {
                    id: "(|β+γ/2|+|γ/2|)² ≤ β+γ".into(),
                    expr: Expr::Sub(
                        b(Expr::Mul(b(p.xi.clone()), b(p.xi.clone()))),
                        b(Expr::Add(b(p.beta.clone()), b(p.gamma.clone()))),
                    ),
                    ineq: Ineq::Le,
                    bound: 0.0,
                },
            ];
            let sums = vec![
                Cond::SumFinite {
                    id: "Σ |1−α−β−γ| < ∞".into(),
                    expr: Expr::Abs(b(p.varphi.clone())),
                },
                Cond::SumFinite {
                    id: "Σ ‖δ_k e_k‖ < ∞".into(),
                    expr: p.delta_err.clone(),
                },
            ];
            let mut v1_items = pointwise.clone();
            v1_items.extend(sums.clone());
            v1_items.extend(vec![
                Cond::LimitIs {
                    id: "α_k → 0".into(),
                    expr: p.alpha.clone(),
                    limit: Limit::Finite(0.0),
                },
                Cond::LimitIs {
                    id: "β_k → 0".into(),
                    expr: p.beta.clone(),
                    limit: Limit::Finite(0.0),
                },
                Cond::LimitIs {
                    id: "γ_k → 1".into(),
                    expr: p.gamma.clone(),
                    limit: Limit::Finite(1.0),
                },
                Cond::LimitIs {
                    id: "c_k → ∞".into(),
                    expr: p.c.clone(),
                    limit: Limit::PlusInfinity,
                },
            ]);
            let v1 = Cond::AllOf {
                id: "variant (i): growing stepsizes".into(),
                items: v1_items,
            };
            let mut v2_items = pointwise.clone();
            v2_items.extend(sums.clone());
            v2_items.push(Cond::LimitIs {
                id: "α_k → 0".into(),
                expr: p.alpha.clone(),
                limit: Limit::Finite(0.0),
            });
            v2_items.extend(eta_window(&p));
            v2_items.push(stepsize_ratio_to_zero(s, &p));
            v2_items.push(stepsize_floor_or_growth(&p));
            let v2 = Cond::AllOf {
                id: "variant (ii): averaged window".into(),
                items: v2_items,
            };
            let mut v3_items = pointwise.clone();
            {
                let alpha_shift = Expr::rule(&s.alpha.shift_forward());
                let gamma_shift = Expr::rule(&s.gamma.shift_forward());
                let da = Expr::Abs(b(Expr::Sub(b(alpha_shift.clone()), b(p.alpha.clone()))));
                let sum_ag = Expr::Add(b(p.alpha.clone()), b(p.gamma.clone()));
                let sum_ag_shift = Expr::Add(b(alpha_shift), b(gamma_shift.clone()));
                v3_items.extend(vec![
                    Cond::ForAll {
                        id: "|γ_k| ≤ 1".into(),
                        expr: p.abs_gamma(),
                        ineq: Ineq::Le,
                        bound: 1.0,
                    },
                    Cond::SumFinite {
                        id: "Σ |(α+γ)_{k+1} − (α+γ)_k| < ∞".into(),
                        expr: Expr::Abs(b(Expr::Sub(b(sum_ag_shift), b(sum_ag.clone())))),
                    },
                    Cond::SumFinite {
                        id: "Σ |1−α−β−γ| < ∞".into(),
                        expr: Expr::Abs(b(p.varphi.clone())),
                    },
                    Cond::SumFinite {
                        id: "Σ |β_k| < ∞".into(),
                        expr: p.abs_beta(),
                    },
                    Cond::SumInfinite {
                        id: "Σ (1−|γ_k|) = ∞".into(),
                        expr: Expr::Sub(b(Expr::Const(1.0)), b(p.abs_gamma())),
                    },
                    Cond::SumFinite {
                        id: "Σ ‖δ_k e_k‖ < ∞".into(),
                        expr: p.delta_err.clone(),
                    },
                    Cond::AnyOf {
                        id: "Σ|α_{k+1}−α_k| < ∞ or |α_{k+1}−α_k|/(1−|γ_{k+1}|) → 0".into(),
                        items: vec![
                            Cond::SumFinite {
                                id: "Σ |α_{k+1}−α_k| < ∞".into(),
                                expr: da.clone(),
                            },
                            Cond::AllOf {
                                id: "|γ_k| < 1 and relative α-increments vanish".into(),
                                items: vec![
                                    Cond::ForAll {
                                        id: "|γ_k| < 1".into(),
                                        expr: p.abs_gamma(),
                                        ineq: Ineq::Lt,
                                        bound: 1.0,
                                    },
                                    Cond::LimitIs {
                                        id: "|α_{k+1}−α_k|/(1−|γ_{k+1}|) → 0".into(),
                                        expr: Expr::Div(
                                            b(da),
                                            b(Expr::Sub(
                                                b(Expr::Const(1.0)),
                                                b(Expr::Abs(b(gamma_shift))),
                                            )),
                                        ),
                                        limit: Limit::Finite(0.0),
                                    },
                                ],
                            },
                        ],
                    },
                    Cond::LimitIs {
                        id: "α_k → 0".into(),
                        expr: p.alpha.clone(),
                        limit: Limit::Finite(0.0),
                    },
                    Cond::LimitIs {
                        id: "α_k + γ_k → 1".into(),
                        expr: sum_ag,
                        limit: Limit::Finite(1.0),
                    },
                ]);
                v3_items.extend(stepsize_floor_and_variation(s, &p));
            }
            let v3 = Cond::AllOf {
                id: "variant (iii): summable increments".into(),
                items: v3_items,
            };
            let v4 = Cond::AllOf {
                id: "variant (iv): anchored with vanishing relative errors".into(),
                items: vec![
                    Cond::ForAll {
                        id: "α_k > 0".into(),
                        expr: p.alpha.clone(),
                        ineq: Ineq::Gt,
                        bound: 0.0,
                    },
                    Cond::ForAll {
                        id: "α_k ≤ 1".into(),
                        expr: p.alpha.clone(),
                        ineq: Ineq::Le,
                        bound: 1.0,
                    },
                    Cond::ForAll {
                        id: "α + |β+γ/2| + |γ/2| ≤ 1".into(),
                        expr: Expr::Add(b(p.alpha.clone()), b(p.xi.clone())),
                        ineq: Ineq::Le,
                        bound: 1.0,
                    },
                    Cond::LimitIs {
                        id: "α_k → 0".into(),
                        expr: p.alpha.clone(),
                        limit: Limit::Finite(0.0),
                    },
                    Cond::LimitIs {
                        id: "β_k → 0".into(),
                        expr: p.beta.clone(),
                        limit: Limit::Finite(0.0),
                    },
                    Cond::LimitIs {
                        id: "γ_k → 1".into(),
                        expr: p.gamma.clone(),
                        limit: Limit::Finite(1.0),
                    },
                    Cond::LimitIs {
                        id: "‖δ_k e_k‖/α_k → 0".into(),
                        expr: Expr::Div(b(p.delta_err.clone()), b(p.alpha.clone())),
                        limit: Limit::Finite(0.0),
                    },
                    Cond::LimitIs {
                        id: "|1−α−β−γ|/α_k → 0".into(),
                        expr: Expr::Div(b(Expr::Abs(b(p.varphi.clone()))), b(p.alpha.clone())),
                        limit: Limit::Finite(0.0),
                    },
                    Cond::LimitIs {
                        id: "c_k → ∞".into(),
                        expr: p.c.clone(),
                        limit: Limit::PlusInfinity,
                    },
                ],
            };
            Cond::AllOf {
                id: "strong-convergence".into(),
                items: vec![
                    Cond::SumInfinite {
                        id: "Σ (1 − (|β+γ/2|+|γ/2|)²) = ∞".into(),
                        expr: p.one_minus_xi_sq(),
                    },
                    Cond::AnyOf {
                        id: "one of variants (i)–(iv)".into(),
                        items: vec![v1, v2, v3, v4],
                    },
                ],
            }
        }
        TheoremId::StrongConvergenceNormalized => {
            let mut global = vec![
                Cond::ForAll {
                    id: "|β+γ/2| + |γ/2| < 1".into(),
                    expr: p.xi.clone(),
                    ineq: Ineq::Lt,
                    bound: 1.0,
                },
                Cond::SumInfinite {
                    id: "Σ (1 − (|β+γ/2|+|γ/2|)²) = ∞".into(),
                    expr: p.one_minus_xi_sq(),
                },
            ];
            global.extend(eta_window(&p));
            global.push(Cond::LimitIs {
                id: "‖δ_k e_k‖/(1−β−γ) → 0".into(),
                expr: Expr::Div(b(p.delta_err.clone()), b(p.phi.clone())),
                limit: Limit::Finite(0.0),
            });
            global.push(stepsize_ratio_to_zero(s, &p));
            global.push(Cond::SupFinite {
                id: "sup (1−β−γ)/(1−ξ²) < ∞".into(),
                expr: Expr::Div(b(p.phi.clone()), b(p.one_minus_xi_sq())),
            });
            global.push(stepsize_floor_or_growth(&p));
            let v1 = Cond::AllOf {
                id: "variant (i): zero anchor".into(),
                items: vec![
                    Cond::AnchorIsZero { id: "u = 0".into() },
                    Cond::SumFinite {
                        id: "Σ |1−β−γ−δ| < ∞".into(),
                        expr: Expr::Abs(b(Expr::Sub(b(p.phi.clone()), b(p.delta.clone())))),
                    },
                    Cond::SupFinite {
                        id: "sup ‖e_k‖ < ∞".into(),
                        expr: p.err.clone(),
                    },
                    Cond::ForAll {
                        id: "|β+γ/2| + |γ/2| + |δ| ≤ 1".into(),
                        expr: Expr::Add(b(p.xi.clone()), b(Expr::Abs(b(p.delta.clone())))),
                        ineq: Ineq::Le,
                        bound: 1.0,
                    },
                    Cond::ForAll {
                        id: "α_k ≡ 0".into(),
                        expr: p.abs_alpha(),
                        ineq: Ineq::Le,
                        bound: 0.0,
                    },
                    Cond::LimitIs {
                        id: "1−β−γ → 0".into(),
                        expr: p.phi.clone(),
                        limit: Limit::Finite(0.0),
                    },
                ],
            };
            let v2 = Cond::AllOf {
                id: "variant (ii): summable anchor weights".into(),
                items: vec![
                    Cond::SupFinite {
                        id: "sup ‖e_k‖ < ∞".into(),
                        expr: p.err.clone(),
                    },
                    Cond::SumFinite {
                        id: "Σ |α_k| < ∞".into(),
                        expr: p.abs_alpha(),
                    },
                    Cond::SumFinite {
                        id: "Σ |1−β−γ−δ| < ∞".into(),
                        expr: Expr::Abs(b(Expr::Sub(b(p.phi.clone()), b(p.delta.clone())))),
                    },
                    Cond::LimitIs {
                        id: "|1−α−β−γ|/(1−β−γ) → 0".into(),
                        expr: Expr::Div(b(Expr::Abs(b(p.varphi.clone()))), b(p.phi.clone())),
                        limit: Limit::Finite(0.0),
                    },
                    Cond::ForAll {
                        id: "|β+γ/2| + |γ/2| + |δ| ≤ 1".into(),
                        expr: Expr::Add(b(p.xi.clone()), b(Expr::Abs(b(p.delta.clone())))),
                        ineq: Ineq::Le,
                        bound: 1.0,
                    },
                ],
            };
            let v3 = Cond::AllOf {
                id: "variant (iii): vanishing anchor weights".into(),
                items: vec![
                    Cond::ForAll {
                        id: "|α| + |β+γ/2| + |γ/2| ≤ 1".into(),
                        expr: Expr::Add(b(p.abs_alpha()), b(p.xi.clone())),
                        ineq: Ineq::Le,
                        bound: 1.0,
                    },
                    Cond::LimitIs {
                        id: "α_k → 0".into(),
                        expr: p.alpha.clone(),
                        limit: Limit::Finite(0.0),
                    },
                    Cond::LimitIs {
                        id: "|1−α−β−γ|/(1−β−γ) → 0".into(),
                        expr: Expr::Div(b(Expr::Abs(b(p.varphi.clone()))), b(p.phi.clone())),
                        limit: Limit::Finite(0.0),
                    },
                    Cond::SumFinite {
                        id: "Σ ‖δ_k e_k‖ < ∞".into(),
                        expr: p.delta_err.clone(),
                    },
                    Cond::SumFinite {
                        id: "Σ |1−α−β−γ| < ∞".into(),
                        expr: Expr::Abs(b(p.varphi.clone())),
                    },
                ],
            };
            global.push(Cond::AnyOf {
                id: "one of variants (i)–(iii)".into(),
                items: vec![v1, v2, v3],
            });
            Cond::AllOf {
                id: "strong-convergence-normalized".into(),
                items: global,
            }
        }
    }
}

/// Classify the schedule against every known theorem bundle.
pub fn check_hypotheses(schedule: &ParameterSchedule, horizon: u64) -> HypothesisReport {
    check_hypotheses_filtered(schedule, horizon, &TheoremId::ALL)
}

/// Classify against a subset of theorems.
pub fn check_hypotheses_filtered(
    schedule: &ParameterSchedule,
    horizon: u64,
    theorems: &[TheoremId],
) -> HypothesisReport {
    let horizon = horizon.max(1);
    let ctx = Ctx { horizon, schedule };
    let entries = theorems
        .iter()
        .map(|&t| {
            let cond = bundle(t, schedule);
            let mut evidence = Vec::new();
            let verdict = cond.check(&ctx, &mut evidence);
            TheoremReport {
                theorem: t,
                verdict,
                evidence,
            }
        })
        .collect();
    HypothesisReport { horizon, entries }
}

/// Named condition expressions exported for plotting and debugging.
pub const CONDITION_EXPRS: [&str; 12] = [
    "alpha",
    "beta",
    "gamma",
    "delta",
    "c",
    "contraction",
    "eta",
    "regularity",
    "monotony",
    "affine-defect",
    "full-defect",
    "error-norm",
];

/// Pointwise values of a named condition expression for `k = 0..=horizon`.
pub fn condition_trace(
    schedule: &ParameterSchedule,
    expr_id: &str,
    horizon: u64,
) -> Result<Vec<f64>, Error> {
    let p = parts(schedule);
    let expr = match expr_id {
        "alpha" => p.alpha,
        "beta" => p.beta,
        "gamma" => p.gamma,
        "delta" => p.delta,
        "c" => p.c,
        // |β+γ/2| + |γ/2|
        "contraction" | "xi" => p.xi,
        // 1 − β − γ/2
        "eta" => p.eta,
        // γ(2β+γ)
        "regularity" | "gamma(2beta+gamma)" => p.gamma_2bg(),
        // γ(β+γ)
        "monotony" | "gamma(beta+gamma)" => p.gamma_bg(),
        // 1 − β − γ
        "affine-defect" | "1-beta-gamma" => p.phi,
        // 1 − α − β − γ
        "full-defect" | "1-alpha-beta-gamma" => p.varphi,
        "error-norm" => p.err,
        other => {
            return Err(Error::UnknownName {
                kind: "condition expression",
                name: other.to_string(),
            })
        }
    };
    (0..=horizon).map(|k| expr.eval(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedules::{ErrorModel, Preset};
    use crate::Vector;

    fn rule(s: &str) -> Rule {
        Rule::parse(s).unwrap()
    }

    fn v2(a: f64, c: f64) -> Vector {
        Vector::from_column_slice(&[a, c])
    }

    fn summable_errors() -> ErrorModel {
        ErrorModel::deterministic(rule("1/(k+2)^2"), v2(1.0, 1.0), false).unwrap()
    }

    fn build(p: Preset, err: ErrorModel) -> ParameterSchedule {
        p.build(Rule::constant(1.0), err, v2(3.0, 0.0), v2(0.0, -5.0))
            .unwrap()
    }

    #[test]
    fn rockafellar_bundle_verdicts() {
        let s = build(Preset::Rockafellar, summable_errors());
        let r = check_hypotheses(&s, 1000);
        assert!(r.get(TheoremId::BoundednessSummable).verdict.holds());
        assert!(r.get(TheoremId::WeakConvergence).verdict.holds());
        // ξ ≡ 1 kills both strong-convergence bundles
        assert!(r.get(TheoremId::StrongConvergence).verdict.fails());
        assert!(matches!(
            r.get(TheoremId::StrongConvergenceNormalized).verdict,
            Verdict::Fails { witness: Some(0) }
        ));
    }

    #[test]
    fn corman_yuan_pointwise_failure_witness() {
        // γ = 2.5: |β+γ/2| + |γ/2| = 0.25 + 1.25 = 1.5 > 1 already at k = 0.
        let s = build(Preset::CormanYuan { gamma: 2.5 }, ErrorModel::Zero);
        let r = check_hypotheses(&s, 100);
        let weak = r.get(TheoremId::WeakConvergence);
        assert!(matches!(weak.verdict, Verdict::Fails { witness: Some(0) }));
        let ev = weak
            .evidence
            .iter()
            .find(|e| e.condition == "|β+γ/2| + |γ/2| ≤ 1")
            .unwrap();
        assert!(matches!(ev.verdict, Verdict::Fails { witness: Some(0) }));
    }

    #[test]
    fn witness_reevaluates_as_violation() {
        let s = build(Preset::CormanYuan { gamma: 2.5 }, ErrorModel::Zero);
        let xi = condition_trace(&s, "contraction", 0).unwrap();
        assert!(xi[0] > 1.0);
    }

    #[test]
    fn marino_xu_strong_convergence_holds() {
        let s = build(
            Preset::MarinoXu {
                alpha: rule("1/(k+2)"),
            },
            summable_errors(),
        );
        let r = check_hypotheses(&s, 1000);
        assert!(r.get(TheoremId::StrongConvergence).verdict.holds());
        // Σ|α| = ∞ kills the summable-perturbation bundles
        assert!(r.get(TheoremId::BoundednessSummable).verdict.fails());
        assert!(r.get(TheoremId::WeakConvergence).verdict.fails());
        assert!(r.get(TheoremId::BoundednessFamilies).verdict.holds());
    }

    #[test]
    fn condition_trace_values() {
        // Eckstein–Bertsekas with γ ≡ 1: γ(2β+γ) ≡ 1.
        let s = build(
            Preset::EcksteinBertsekas {
                gamma: Rule::constant(1.0),
            },
            ErrorModel::Zero,
        );
        let tr = condition_trace(&s, "regularity", 3).unwrap();
        assert_eq!(tr, vec![1.0; 4]);
        // yao_noor-style schedule: 1 − β − γ/2 at k = 0 is 0.625.
        let ys = Preset::YaoShahzad {
            beta: rule("(k+1)/(2(k+2))"),
            gamma: rule("(k+1)/(2(k+2))"),
        }
        .build(
            Rule::constant(1.0),
            ErrorModel::Zero,
            v2(0.0, 0.0),
            v2(1.0, 1.0),
        )
        .unwrap();
        let eta = condition_trace(&ys, "eta", 0).unwrap();
        assert!((eta[0] - 0.625).abs() < 1e-15);
        // Rockafellar: contraction ≡ 1.
        let rk = build(Preset::Rockafellar, ErrorModel::Zero);
        let xi = condition_trace(&rk, "contraction", 5).unwrap();
        assert_eq!(xi, vec![1.0; 6]);
        assert!(condition_trace(&rk, "no-such-expr", 5).is_err());
    }

    #[test]
    fn verdicts_stable_under_horizon_doubling() {
        let schedules = [
            build(Preset::Rockafellar, summable_errors()),
            build(Preset::CormanYuan { gamma: 2.5 }, ErrorModel::Zero),
            build(
                Preset::MarinoXu {
                    alpha: rule("1/(k+2)"),
                },
                summable_errors(),
            ),
        ];
        for s in &schedules {
            let mut k = 500;
            let base = check_hypotheses(s, k);
            for _ in 0..4 {
                k *= 2;
                let more = check_hypotheses(s, k);
                for (a, b) in base.entries.iter().zip(&more.entries) {
                    let compatible = matches!(
                        (&a.verdict, &b.verdict),
                        (Verdict::Holds, Verdict::Holds)
                            | (Verdict::Fails { .. }, Verdict::Fails { .. })
                            | (Verdict::Undecided, _)
                    );
                    assert!(
                        compatible,
                        "verdict for {} flipped: {:?} vs {:?}",
                        a.theorem, a.verdict, b.verdict
                    );
                }
            }
        }
    }

    #[test]
    fn violations_beyond_the_horizon_are_still_caught() {
        // γ exceeds 1 only on k ∈ (20000, 30000), far past the requested
        // horizon; the scan extends to the polynomial stability index, so the
        // pointwise contraction bound still fails with a concrete witness.
        let gamma = Rule::parse("(1000000000-(k-20000)(k-30000))/1000000000").unwrap();
        assert!(gamma.eval(100).unwrap() < 1.0);
        assert!(gamma.eval(25_000).unwrap() > 1.0);
        let s = ParameterSchedule::new(
            rule("0"),
            rule("0"),
            gamma,
            rule("1"),
            rule("1"),
            ErrorModel::Zero,
            v2(0.0, 0.0),
            v2(1.0, 1.0),
        )
        .unwrap();
        let r = check_hypotheses_filtered(&s, 100, &[TheoremId::WeakConvergence]);
        let ev = r.entries[0]
            .evidence
            .iter()
            .find(|e| e.condition == "|β+γ/2| + |γ/2| ≤ 1")
            .unwrap();
        match &ev.verdict {
            Verdict::Fails { witness: Some(k) } => {
                assert!(*k > 20_000 && *k < 30_000, "witness {k}");
                // the witness really violates the condition
                let tr = condition_trace(&s, "contraction", *k).unwrap();
                assert!(tr[*k as usize] > 1.0);
            }
            other => panic!("expected a witnessed failure, got {other:?}"),
        }
    }

    #[test]
    fn vanishing_stepsizes_fail_the_floor_condition() {
        // c_k = 1/(k+1) stays positive but its infimum is 0 and it does not
        // grow, so every stepsize disjunction fails asymptotically.
        let s = ParameterSchedule::new(
            rule("0"),
            rule("0"),
            rule("1"),
            rule("1"),
            rule("1/(k+1)"),
            ErrorModel::Zero,
            v2(0.0, 0.0),
            v2(1.0, 1.0),
        )
        .unwrap();
        let r = check_hypotheses(&s, 500);
        let weak = r.get(TheoremId::WeakConvergence);
        assert!(weak.verdict.fails());
        let floor = weak
            .evidence
            .iter()
            .find(|e| e.condition == "inf c_k > 0")
            .unwrap();
        assert!(matches!(floor.verdict, Verdict::Fails { witness: None }));
        let growth = weak
            .evidence
            .iter()
            .find(|e| e.condition == "c_k → ∞")
            .unwrap();
        assert!(growth.verdict.fails());
    }

    #[test]
    fn anchored_instance_one_certifies_strong_convergence() {
        // α = 1/(k+3), β = 1/(k+2), γ = k/(k+2), δ ≡ 1, c_k = k (override at
        // 0), summable errors: the growing-stepsize variant certifies.
        let s = ParameterSchedule::new(
            rule("1/(k+3)"),
            rule("1/(k+2)"),
            rule("k/(k+2)"),
            rule("1"),
            rule("{0: 1, tail: k}"),
            summable_errors(),
            v2(3.0, 0.0),
            v2(0.0, -5.0),
        )
        .unwrap();
        let r = check_hypotheses(&s, 1000);
        assert!(r.get(TheoremId::StrongConvergence).verdict.holds());
        assert!(r.get(TheoremId::BoundednessFamilies).verdict.holds());
    }

    #[test]
    fn anchored_instance_three_certificates() {
        // With β = γ = k/(2(k+2)) the defect ratio (1−α−β−γ)/(1−β−γ) tends
        // to 1/2, so no strong-convergence bundle certifies, although the
        // boundedness equivalence does (and the run itself converges — the
        // bundles are sufficient conditions, not necessary ones).
        let printed = ParameterSchedule::new(
            rule("1/(k+3)"),
            rule("k/(2(k+2))"),
            rule("k/(2(k+2))"),
            rule("1"),
            rule("1"),
            summable_errors(),
            v2(3.0, 0.0),
            v2(0.0, -5.0),
        )
        .unwrap();
        let r = check_hypotheses(&printed, 1000);
        assert!(r.get(TheoremId::BoundednessFamilies).verdict.holds());
        assert!(r.get(TheoremId::StrongConvergence).verdict.fails());
        assert!(r
            .get(TheoremId::StrongConvergenceNormalized)
            .verdict
            .fails());

        // Shifting the numerators to k+1 makes the ratio vanish and the
        // normalized bundle certify.
        let shifted = ParameterSchedule::new(
            rule("1/(k+3)"),
            rule("(k+1)/(2(k+2))"),
            rule("(k+1)/(2(k+2))"),
            rule("1"),
            rule("1"),
            summable_errors(),
            v2(3.0, 0.0),
            v2(0.0, -5.0),
        )
        .unwrap();
        let r = check_hypotheses(&shifted, 1000);
        assert!(r
            .get(TheoremId::StrongConvergenceNormalized)
            .verdict
            .holds());
    }

    #[test]
    fn random_error_bounds_stay_conservative() {
        // A random error model only upper-bounds ‖e_k‖: a summable bound
        // certifies, a divergent bound leaves the verdict open.
        let summable = ErrorModel::RandomBounded {
            bound: rule("1/(k+2)^2"),
            seed: 1,
        };
        let s = build(Preset::Rockafellar, summable);
        let r = check_hypotheses(&s, 200);
        assert!(r.get(TheoremId::BoundednessSummable).verdict.holds());

        let wide = ErrorModel::RandomBounded {
            bound: rule("1/(k+2)"),
            seed: 1,
        };
        let s = build(Preset::Rockafellar, wide);
        let r = check_hypotheses(&s, 200);
        let ev = r
            .get(TheoremId::BoundednessSummable)
            .evidence
            .iter()
            .find(|e| e.condition == "Σ ‖δ_k e_k‖ < ∞")
            .unwrap();
        assert_eq!(ev.verdict, Verdict::Undecided);
        assert_eq!(ev.tag, Tag::FiniteHorizon);
    }
}
