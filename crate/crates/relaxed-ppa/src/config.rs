//! TOML experiment descriptions: operator, schedule, and run settings in one
//! hand-editable document.
//!
//! ```toml
//! version = 1
//!
//! [operator]
//! kind = "affine_psd"          # normal_cone | constant | piecewise_1d |
//!                              # ball_augmented | scaled
//! dim = 2
//! matrix = [1.0, 0.0, 0.0, 0.0]   # row-major
//! offset = [-1.0, 0.0]
//!
//! [schedule]
//! alpha = "1/(k+3)"            # rule grammar, see the rules module
//! beta = "1/(k+2)"
//! gamma = "k/(k+2)"
//! delta = "1"
//! c = "{0: 1, tail: k}"
//! anchor = [3.0, 0.0]
//! x0 = [0.0, -5.0]
//!
//! [schedule.error]
//! kind = "deterministic"       # zero | deterministic | random
//! magnitude = "1/(k+2)^2"
//! direction = [1.0, 1.0]       # or direction = "cycling"
//! alternating = false
//!
//! [run]
//! max_iters = 100000
//! record_stride = 50
//! record_vectors = false
//! stop = { kind = "fixed" }    # residual_below | distance_below | divergence
//! ```
//!
//! Schedules can also name a preset instead of spelling out coefficients:
//!
//! ```toml
//! [schedule]
//! preset = "eckstein_bertsekas"
//! c = "1"
//! anchor = [0.0, 0.0]
//! x0 = [4.0, 3.0]
//! [schedule.params]
//! gamma = "c:1.5"
//! ```

use serde::{Deserialize, Serialize};

use crate::engine::{RunConfig, StopRule, DIVERGENCE_THRESHOLD};
use crate::operators::{ConvexSet, ConvexSetSpec, OperatorSpec};
use crate::rules::Rule;
use crate::schedules::{DeclaredTag, ErrorModel, ParameterSchedule, Preset, SummabilityClaim};
use crate::{Error, Vector};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigDoc {
    pub version: u32,
    pub operator: OperatorCfg,
    pub schedule: ScheduleCfg,
    #[serde(default)]
    pub run: RunCfg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorCfg {
    AffinePsd {
        dim: usize,
        /// Row-major `dim × dim` entries.
        matrix: Vec<f64>,
        offset: Vec<f64>,
    },
    NormalCone {
        set: ConvexSetSpec,
    },
    Constant {
        value: Vec<f64>,
    },
    Piecewise1d {
        breakpoints: Vec<f64>,
        slopes: Vec<f64>,
    },
    BallAugmented {
        inner: Box<OperatorCfg>,
        radius: f64,
    },
    Scaled {
        inner: Box<OperatorCfg>,
        factor: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleCfg {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<std::collections::BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    pub c: String,
    pub anchor: Vec<f64>,
    pub x0: Vec<f64>,
    #[serde(default)]
    pub error: ErrorCfg,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<TagCfg>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TagCfg {
    pub expr: String,
    /// `summable`, `divergent-sum`, or `bounded`.
    pub claim: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ErrorCfg {
    #[default]
    Zero,
    Deterministic {
        magnitude: String,
        direction: DirectionCfg,
        #[serde(default)]
        alternating: bool,
    },
    Random {
        bound: String,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DirectionCfg {
    Cycling(String),
    Fixed(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunCfg {
    #[serde(default = "default_max_iters")]
    pub max_iters: u64,
    #[serde(default = "default_stride")]
    pub record_stride: u64,
    #[serde(default)]
    pub record_vectors: bool,
    #[serde(default)]
    pub stop: StopCfg,
}

fn default_max_iters() -> u64 {
    10_000
}
fn default_stride() -> u64 {
    1
}

impl Default for RunCfg {
    fn default() -> Self {
        RunCfg {
            max_iters: default_max_iters(),
            record_stride: default_stride(),
            record_vectors: false,
            stop: StopCfg::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StopCfg {
    #[default]
    Fixed,
    ResidualBelow {
        tol: f64,
    },
    DistanceBelow {
        tol: f64,
    },
    Divergence {
        #[serde(default = "default_divergence")]
        norm_threshold: f64,
    },
}

fn default_divergence() -> f64 {
    DIVERGENCE_THRESHOLD
}

/// Parse and validate a config document into runnable pieces.
pub fn parse_config(text: &str) -> Result<(OperatorSpec, ParameterSchedule, RunConfig), Error> {
    let doc = parse_doc(text)?;
    build(&doc)
}

/// Parse the raw document without building the domain objects.
pub fn parse_doc(text: &str) -> Result<ConfigDoc, Error> {
    if text.trim().is_empty() {
        return Err(Error::ConfigSyntax {
            line: 1,
            col: 1,
            msg: "empty config".into(),
        });
    }
    let doc: ConfigDoc = toml::from_str(text).map_err(|e| {
        let (line, col) = e.span().map(|s| line_col(text, s.start)).unwrap_or((1, 1));
        Error::ConfigSyntax {
            line,
            col,
            msg: e.message().to_string(),
        }
    })?;
    if doc.version != CONFIG_VERSION {
        return Err(Error::Config {
            field: "version".into(),
            msg: format!(
                "unsupported version {}, expected {CONFIG_VERSION}",
                doc.version
            ),
        });
    }
    Ok(doc)
}

fn line_col(text: &str, byte: usize) -> (usize, usize) {
    let mut line = 1;
    let mut col = 1;
    for (i, ch) in text.char_indices() {
        if i >= byte {
            break;
        }
        if ch == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

/// Build validated domain objects from a parsed document.
pub fn build(doc: &ConfigDoc) -> Result<(OperatorSpec, ParameterSchedule, RunConfig), Error> {
    let operator = build_operator(&doc.operator)?;
    let schedule = build_schedule(&doc.schedule)?;
    if schedule.dim() != operator.dim() {
        return Err(Error::Config {
            field: "schedule.x0".into(),
            msg: format!(
                "schedule dimension {} does not match operator dimension {}",
                schedule.dim(),
                operator.dim()
            ),
        });
    }
    let run = build_run(&doc.run)?;
    Ok((operator, schedule, run))
}

pub fn build_operator(cfg: &OperatorCfg) -> Result<OperatorSpec, Error> {
    match cfg {
        OperatorCfg::AffinePsd {
            dim,
            matrix,
            offset,
        } => {
            if matrix.len() != dim * dim {
                return Err(Error::Config {
                    field: "operator.matrix".into(),
                    msg: format!(
                        "expected {} row-major entries, got {}",
                        dim * dim,
                        matrix.len()
                    ),
                });
            }
            let q = nalgebra::DMatrix::from_row_slice(*dim, *dim, matrix);
            OperatorSpec::affine_psd(q, Vector::from_column_slice(offset)).map_err(at("operator"))
        }
        OperatorCfg::NormalCone { set } => Ok(OperatorSpec::normal_cone(
            ConvexSet::new(set.clone()).map_err(at("operator.set"))?,
        )),
        OperatorCfg::Constant { value } => {
            OperatorSpec::constant(Vector::from_column_slice(value)).map_err(at("operator.value"))
        }
        OperatorCfg::Piecewise1d {
            breakpoints,
            slopes,
        } => OperatorSpec::piecewise_linear_1d(breakpoints.clone(), slopes.clone())
            .map_err(at("operator")),
        OperatorCfg::BallAugmented { inner, radius } => {
            OperatorSpec::ball_augmented(build_operator(inner)?, *radius).map_err(at("operator"))
        }
        OperatorCfg::Scaled { inner, factor } => {
            OperatorSpec::scaled(build_operator(inner)?, *factor).map_err(at("operator"))
        }
    }
}

fn at(field: &'static str) -> impl Fn(Error) -> Error {
    move |e| Error::Config {
        field: field.into(),
        msg: e.to_string(),
    }
}

fn parse_rule_field(field: &'static str, s: &str) -> Result<Rule, Error> {
    Rule::parse(s).map_err(|e| Error::Config {
        field: field.into(),
        msg: e.to_string(),
    })
}

pub fn build_schedule(cfg: &ScheduleCfg) -> Result<ParameterSchedule, Error> {
    let anchor = Vector::from_column_slice(&cfg.anchor);
    let x0 = Vector::from_column_slice(&cfg.x0);
    let c = parse_rule_field("schedule.c", &cfg.c)?;
    let error = build_error(&cfg.error)?;

    let mut schedule = if let Some(name) = &cfg.preset {
        let params = cfg.params.clone().unwrap_or_default();
        let get = |key: &'static str| -> Result<Rule, Error> {
            let s = params.get(key).ok_or_else(|| Error::Config {
                field: format!("schedule.params.{key}"),
                msg: "missing preset parameter".into(),
            })?;
            Rule::parse(s).map_err(|e| Error::Config {
                field: format!("schedule.params.{key}"),
                msg: e.to_string(),
            })
        };
        let preset = match name.as_str() {
            "rockafellar" => Preset::Rockafellar,
            "eckstein_bertsekas" => Preset::EcksteinBertsekas {
                gamma: get("gamma")?,
            },
            "corman_yuan" => {
                let g = get("gamma")?;
                let v = g.eval(0).map_err(|e| Error::Config {
                    field: "schedule.params.gamma".into(),
                    msg: e.to_string(),
                })?;
                // this preset fixes γ for all k
                if g.eval(1).ok() != Some(v) || g.eval(1000).ok() != Some(v) {
                    return Err(Error::Config {
                        field: "schedule.params.gamma".into(),
                        msg: "corman_yuan takes a constant gamma (use the c: form)".into(),
                    });
                }
                Preset::CormanYuan { gamma: v }
            }
            "xu_modified" => Preset::XuModified {
                alpha: get("alpha")?,
            },
            "marino_xu" => Preset::MarinoXu {
                alpha: get("alpha")?,
            },
            "yao_noor" => Preset::YaoNoor {
                alpha: get("alpha")?,
                beta: get("beta")?,
            },
            "yao_shahzad" => Preset::YaoShahzad {
                beta: get("beta")?,
                gamma: get("gamma")?,
            },
            other => {
                return Err(Error::UnknownName {
                    kind: "preset",
                    name: other.to_string(),
                })
            }
        };
        preset.build(c, error, anchor, x0).map_err(|e| match e {
            Error::InvalidParameter(msg) => Error::Config {
                field: "schedule.params".into(),
                msg,
            },
            other => other,
        })?
    } else {
        let field = |name: &'static str, value: &Option<String>| -> Result<Rule, Error> {
            let s = value.as_ref().ok_or_else(|| Error::Config {
                field: format!("schedule.{name}"),
                msg: "missing coefficient rule (or use a preset)".into(),
            })?;
            Rule::parse(s).map_err(|e| Error::Config {
                field: format!("schedule.{name}"),
                msg: e.to_string(),
            })
        };
        ParameterSchedule::new(
            field("alpha", &cfg.alpha)?,
            field("beta", &cfg.beta)?,
            field("gamma", &cfg.gamma)?,
            field("delta", &cfg.delta)?,
            c,
            error,
            anchor,
            x0,
        )
        .map_err(|e| match e {
            Error::RuleEval { k, msg } => Error::Config {
                field: "schedule.c".into(),
                msg: format!("at k = {k}: {msg}"),
            },
            other => other,
        })?
    };

    for tag in &cfg.tags {
        let claim = match tag.claim.as_str() {
            "summable" => SummabilityClaim::Summable,
            "divergent-sum" => SummabilityClaim::DivergentSum,
            "bounded" => SummabilityClaim::Bounded,
            other => {
                return Err(Error::Config {
                    field: "schedule.tags".into(),
                    msg: format!("unknown claim `{other}`"),
                })
            }
        };
        schedule.declared.push(DeclaredTag {
            expr: tag.expr.clone(),
            claim,
        });
    }
    Ok(schedule)
}

fn build_error(cfg: &ErrorCfg) -> Result<ErrorModel, Error> {
    Ok(match cfg {
        ErrorCfg::Zero => ErrorModel::Zero,
        ErrorCfg::Deterministic {
            magnitude,
            direction,
            alternating,
        } => {
            let rule = parse_rule_field("schedule.error.magnitude", magnitude)?;
            match direction {
                DirectionCfg::Fixed(d) => {
                    ErrorModel::deterministic(rule, Vector::from_column_slice(d), *alternating)
                        .map_err(at("schedule.error.direction"))?
                }
                DirectionCfg::Cycling(word) if word == "cycling" => {
                    ErrorModel::DeterministicDecay {
                        magnitude: rule,
                        direction: crate::schedules::ErrorDirection::CyclingBasis,
                        alternating: *alternating,
                    }
                }
                DirectionCfg::Cycling(other) => {
                    return Err(Error::Config {
                        field: "schedule.error.direction".into(),
                        msg: format!("expected \"cycling\" or a vector, got `{other}`"),
                    })
                }
            }
        }
        ErrorCfg::Random { bound, seed } => ErrorModel::RandomBounded {
            bound: parse_rule_field("schedule.error.bound", bound)?,
            seed: *seed,
        },
    })
}

fn build_run(cfg: &RunCfg) -> Result<RunConfig, Error> {
    let stop = match &cfg.stop {
        StopCfg::Fixed => StopRule::FixedIterations,
        StopCfg::ResidualBelow { tol } => StopRule::ResidualBelow { tol: *tol },
        StopCfg::DistanceBelow { tol } => StopRule::DistanceToTargetBelow { tol: *tol },
        StopCfg::Divergence { norm_threshold } => StopRule::DivergenceDetected {
            norm_threshold: *norm_threshold,
        },
    };
    Ok(RunConfig {
        max_iters: cfg.max_iters,
        stop,
        record_stride: cfg.record_stride,
        record_vectors: cfg.record_vectors,
    })
}

/// Serialize a document back to TOML.
pub fn serialize_doc(doc: &ConfigDoc) -> Result<String, Error> {
    toml::to_string_pretty(doc).map_err(|e| Error::Config {
        field: "<document>".into(),
        msg: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX4_1: &str = r#"
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
max_iters = 1000
record_stride = 10
"#;

    #[test]
    fn parses_full_example_config() {
        let (op, schedule, run) = parse_config(EX4_1).unwrap();
        assert_eq!(op.dim(), 2);
        let c5 = schedule.evaluate(5).unwrap();
        assert_eq!(c5.alpha, 0.125);
        assert_eq!(c5.c, 5.0);
        assert_eq!(run.max_iters, 1000);
        assert_eq!(run.record_stride, 10);
    }

    #[test]
    fn empty_config_reports_position_zero() {
        match parse_config("") {
            Err(Error::ConfigSyntax {
                line: 1, col: 1, ..
            }) => {}
            other => panic!("expected syntax error at start, got {other:?}"),
        }
    }

    #[test]
    fn preset_domain_violation_names_the_field() {
        let text = r#"
version = 1
[operator]
kind = "constant"
value = [0.0, 0.0]
[schedule]
preset = "eckstein_bertsekas"
c = "1"
anchor = [0.0, 0.0]
x0 = [1.0, 1.0]
[schedule.params]
gamma = "c:-1"
"#;
        match parse_config(text) {
            Err(Error::Config { field, msg }) => {
                assert!(field.starts_with("schedule.params"), "{field}: {msg}");
                assert!(msg.contains("gamma"), "{msg}");
            }
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn nonpositive_stepsize_at_k0_is_semantic_error() {
        let text = r#"
version = 1
[operator]
kind = "constant"
value = [1.0]
[schedule]
alpha = "0"
beta = "0"
gamma = "1"
delta = "1"
c = "k"
anchor = [0.0]
x0 = [0.0]
"#;
        match parse_config(text) {
            Err(Error::Config { field, .. }) => assert_eq!(field, "schedule.c"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn round_trip_preserves_documents() {
        let doc = parse_doc(EX4_1).unwrap();
        let text = serialize_doc(&doc).unwrap();
        let doc2 = parse_doc(&text).unwrap();
        assert_eq!(doc, doc2);
    }

    #[test]
    fn version_guard() {
        let text = EX4_1.replace("version = 1", "version = 7");
        assert!(matches!(parse_config(&text), Err(Error::Config { .. })));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let text = EX4_1.replace("anchor = [3.0, 0.0]", "anchor = [3.0, 0.0, 1.0]");
        assert!(parse_config(&text).is_err());
    }
}
