//! Generalized proximal point iterations with relaxed parameters.
//!
//! The crate revolves around the recursion
//!
//! ```text
//! x_{k+1} = α_k·u + β_k·x_k + γ_k·J_{c_k A}(x_k) + δ_k·e_k
//! ```
//!
//! for a maximally monotone operator `A` on `R^n`, where `J_{cA} = (Id + cA)^{-1}`
//! is the resolvent, `u` is a fixed anchor, `(e_k)` is an error sequence, and
//! `(α_k, β_k, γ_k, δ_k, c_k)` are scalar schedules. Classical proximal point
//! methods (Rockafellar, Eckstein–Bertsekas, Corman–Yuan, Xu, Marino–Xu,
//! Yao–Noor, Yao–Shahzad) are special cases obtained by pinning coefficients;
//! all of them are available as [`schedules::Preset`]s.
//!
//! What the crate provides:
//!
//! * [`operators`] — a catalogue of maximally monotone operators with exact
//!   resolvents, Yosida approximations, reflected resolvents, zero-set
//!   oracles, and the ball-restricted augmentation `A + ∂ι_{B[0;r]}`.
//! * [`schedules`] — coefficient schedules as closed-form rules, the seven
//!   literature presets, and a hypothesis checker that classifies a schedule
//!   against the boundedness-equivalence, weak-convergence, and
//!   strong-convergence condition bundles.
//! * [`sequences`] — the scalar comparison lemmas behind the convergence
//!   proofs, implemented as tight majorant recurrences with verdicts; these
//!   double as oracles for property tests.
//! * [`engine`] — the iteration itself with per-step diagnostics (residuals,
//!   distances to the projected anchor, anchor inner products) and CSV export.
//! * [`harness`] — named experiment suites with expected values, used by the
//!   acceptance tests and the command-line front end.
//! * [`config`] — a TOML experiment-description format gluing the above
//!   together.
//!
//! Everything runs on finite-dimensional `R^n` with the standard inner
//! product. In that setting weak and strong convergence coincide, so the
//! diagnostics observe ordinary limits; the distinction in the theory only
//! matters in infinite dimensions.
//!
//! The `examples/` directory contains one runnable program per capability;
//! `cargo run --example example4` reproduces the three concrete schedule
//! instances with their strong-convergence targets.

pub mod config;
pub mod engine;
pub mod harness;
pub mod operators;
pub mod rules;
pub mod schedules;
pub mod sequences;

/// Points of the ambient space `R^n`.
pub type Vector = nalgebra::DVector<f64>;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("rule parse error at byte {pos} in `{input}`: {msg}")]
    RuleParse {
        input: String,
        pos: usize,
        msg: String,
    },

    #[error("rule evaluation failed at k = {k}: {msg}")]
    RuleEval { k: u64, msg: String },

    #[error("root finding failed: {0}")]
    RootFind(String),

    #[error("operation needs a zero-set oracle with a projection, none available")]
    MissingOracle,

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("config error in field `{field}`: {msg}")]
    Config { field: String, msg: String },

    #[error("config syntax error at line {line}, column {col}: {msg}")]
    ConfigSyntax {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn check_finite(v: &Vector, what: &'static str) -> Result<(), Error> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

pub(crate) fn check_dim(v: &Vector, expected: usize) -> Result<(), Error> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected,
            got: v.len(),
        })
    }
}
