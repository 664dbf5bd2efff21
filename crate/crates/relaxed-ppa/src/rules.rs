//! Closed-form scalar sequences `k ↦ r(k)` used for relaxation coefficients,
//! stepsizes, and error magnitudes.
//!
//! A rule is a rational function of the iteration index with integer
//! coefficients, optionally preceded by finitely many explicit overrides.
//! This class covers every schedule we care about while keeping the
//! asymptotic questions (limit, eventual sign, summability) decidable by
//! inspecting polynomial degrees and leading coefficients.
//!
//! Grammar (EBNF):
//!
//! ```text
//! rule       = "c:" number | piecewise | rational ;
//! piecewise  = "{" { integer ":" scalar "," } "tail" ":" rational "}" ;
//! rational   = poly [ "/" poly ] ;
//! poly       = [ "-" ] term { ( "+" | "-" ) term } ;
//! term       = factor { [ "*" ] factor } ;      (* juxtaposition multiplies *)
//! factor     = base [ "^" integer ] ;
//! base       = "k" | integer | "(" poly ")" ;
//! scalar     = number ;                          (* override values may be decimal *)
//! number     = integer [ "." digits ] ;
//! ```
//!
//! Examples: `"0"`, `"1/(k+3)"`, `"k/(2(k+2))"`, `"1/(k+2)^2"`, `"c:2.5"`,
//! `"{0: 1, tail: k}"`.

use std::collections::BTreeMap;
use std::fmt;

use crate::Error;

/// Largest magnitude we allow an exactly-evaluated polynomial to reach before
/// reporting overflow. Values above 2^53 are no longer exact in f64.
const EVAL_LIMIT: f64 = 9.007_199_254_740_992e15; // 2^53

/// Dense polynomial in the index variable, ascending coefficients.
///
/// Coefficients come from integer literals and stay exactly representable in
/// f64 throughout the ring operations used here.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn constant(v: f64) -> Self {
        Poly { coeffs: vec![v] }.trimmed()
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        Poly { coeffs }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(0.0);
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0.0]
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, k: u64) -> f64 {
        let x = k as f64;
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.coeffs.get(i).copied().unwrap_or(0.0)
                + other.coeffs.get(i).copied().unwrap_or(0.0);
        }
        Poly { coeffs: out }.trimmed()
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
        .trimmed()
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::constant(0.0);
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly { coeffs: out }.trimmed()
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
        .trimmed()
    }

    /// `p(k+1)` as a polynomial in `k`.
    pub fn shift_forward(&self) -> Poly {
        let d = self.coeffs.len();
        let mut out = vec![0.0; d];
        // binomial expansion of (k+1)^i
        let mut binom = vec![vec![0.0f64; d]; d];
        for (i, row) in binom.iter_mut().enumerate() {
            row[0] = 1.0;
            for j in 1..=i {
                row[j] = row[j - 1] * ((i - j + 1) as f64) / (j as f64);
            }
        }
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, slot) in out.iter_mut().enumerate().take(i + 1) {
                *slot += a * binom[i][i - j];
            }
        }
        Poly { coeffs: out }.trimmed()
    }

    /// Fujiwara bound: every root has magnitude at most
    /// `2·max_i |a_{d-i}/a_d|^{1/i}`, so the polynomial keeps the sign of its
    /// leading coefficient beyond it. Unlike the Cauchy bound this stays
    /// proportional to the root magnitudes under polynomial products, which
    /// keeps stability indices scannable.
    pub fn root_bound(&self) -> u64 {
        let d = self.degree();
        if d == 0 {
            return 0;
        }
        let lead = self.leading().abs();
        let mut bound = 0.0f64;
        for (j, c) in self.coeffs[..d].iter().enumerate() {
            let i = (d - j) as f64;
            bound = bound.max((c.abs() / lead).powf(1.0 / i));
        }
        let b = 2.0 * bound;
        if b >= 9.0e18 {
            u64::MAX
        } else {
            b.ceil() as u64 + 1
        }
    }
}

/// Limit of a scalar sequence as the index grows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Limit {
    Finite(f64),
    PlusInfinity,
    MinusInfinity,
}

impl Limit {
    pub fn finite(&self) -> Option<f64> {
        match self {
            Limit::Finite(v) => Some(*v),
            _ => None,
        }
    }
}

/// Ratio of two polynomials, the asymptotic part of every rule.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFn {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFn {
    pub fn constant(v: f64) -> Self {
        RationalFn {
            num: Poly::constant(v),
            den: Poly::constant(1.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, k: u64) -> Result<f64, Error> {
        let n = self.num.eval(k);
        let d = self.den.eval(k);
        if n.abs() > EVAL_LIMIT || d.abs() > EVAL_LIMIT {
            return Err(Error::RuleEval {
                k,
                msg: "polynomial value exceeds the exact f64 range".into(),
            });
        }
        if d == 0.0 {
            return Err(Error::RuleEval {
                k,
                msg: "denominator vanishes".into(),
            });
        }
        Ok(n / d)
    }

    pub fn add(&self, other: &RationalFn) -> RationalFn {
        RationalFn {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn sub(&self, other: &RationalFn) -> RationalFn {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RationalFn) -> RationalFn {
        RationalFn {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    pub fn div(&self, other: &RationalFn) -> Result<RationalFn, Error> {
        if other.num.is_zero() {
            return Err(Error::InvalidParameter(
                "division of rules by the zero sequence".into(),
            ));
        }
        Ok(RationalFn {
            num: self.num.mul(&other.den),
            den: self.den.mul(&other.num),
        })
    }

    /// Sign of the sequence for every index beyond [`Self::stable_from`]:
    /// `1`, `-1`, or `0` when identically zero.
    pub fn eventual_sign(&self) -> i8 {
        if self.num.is_zero() {
            return 0;
        }
        let s = self.num.leading().signum() * self.den.leading().signum();
        if s > 0.0 {
            1
        } else {
            -1
        }
    }

    pub fn limit(&self) -> Limit {
        if self.num.is_zero() {
            return Limit::Finite(0.0);
        }
        let (dn, dd) = (self.num.degree(), self.den.degree());
        if dn < dd {
            Limit::Finite(0.0)
        } else if dn == dd {
            Limit::Finite(self.num.leading() / self.den.leading())
        } else if self.eventual_sign() > 0 {
            Limit::PlusInfinity
        } else {
            Limit::MinusInfinity
        }
    }

    /// `deg den - deg num`; `Σ |r(k)|` converges iff the gap is at least 2
    /// (or the numerator is identically zero).
    pub fn degree_gap(&self) -> i64 {
        self.den.degree() as i64 - self.num.degree() as i64
    }

    pub fn abs_summable(&self) -> bool {
        self.num.is_zero() || self.degree_gap() >= 2
    }

    /// Index beyond which both polynomials keep a fixed sign, so the
    /// sequence itself is single-signed and `eventual_sign` is exact.
    pub fn stable_from(&self) -> u64 {
        self.num.root_bound().max(self.den.root_bound())
    }

    /// The sequence `k ↦ r(k+1)`.
    pub fn shift_forward(&self) -> RationalFn {
        RationalFn {
            num: self.num.shift_forward(),
            den: self.den.shift_forward(),
        }
    }
}

/// A scalar rule: finitely many explicit overrides followed by a rational
/// tail. Constants and plain rationals are the degenerate cases.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    overrides: BTreeMap<u64, f64>,
    tail: RationalFn,
    src: String,
}

impl Rule {
    pub fn constant(v: f64) -> Rule {
        Rule {
            overrides: BTreeMap::new(),
            tail: RationalFn::constant(v),
            src: format!("c:{}", fmt_scalar(v)),
        }
    }

    pub fn from_rational(tail: RationalFn, src: impl Into<String>) -> Rule {
        Rule {
            overrides: BTreeMap::new(),
            tail,
            src: src.into(),
        }
    }

    pub fn with_override(mut self, k: u64, v: f64) -> Rule {
        self.overrides.insert(k, v);
        self.src = self.render();
        self
    }

    /// Explicit finite list of leading values followed by a closed-form
    /// tail; covers sequences outside the rational class (geometric decay,
    /// tabulated data) on any finite window.
    pub fn from_values(values: &[f64], tail: Rule) -> Rule {
        let overrides: BTreeMap<u64, f64> = values
            .iter()
            .enumerate()
            .map(|(k, v)| (k as u64, *v))
            .collect();
        Rule {
            overrides,
            tail: tail.tail.clone(),
            src: format!("[{} explicit values, tail: {}]", values.len(), tail.src),
        }
    }

    /// Parse a rule from the grammar in the module documentation.
    pub fn parse(input: &str) -> Result<Rule, Error> {
        Parser::new(input).parse_rule()
    }

    pub fn eval(&self, k: u64) -> Result<f64, Error> {
        if let Some(v) = self.overrides.get(&k) {
            return Ok(*v);
        }
        self.tail.eval(k)
    }

    /// Asymptotic part; exact for every `k` past the overrides.
    pub fn tail(&self) -> &RationalFn {
        &self.tail
    }

    pub fn overrides(&self) -> &BTreeMap<u64, f64> {
        &self.overrides
    }

    /// Index from which the tail rational is in effect and single-signed.
    pub fn stable_from(&self) -> u64 {
        let over = self.overrides.keys().next_back().map_or(0, |k| k + 1);
        over.max(self.tail.stable_from())
    }

    /// Rejects rules whose tail denominator vanishes at any admissible index.
    pub fn validate(&self) -> Result<(), Error> {
        let bound = self.tail.den.root_bound();
        for k in 0..=bound {
            if self.overrides.contains_key(&k) {
                continue;
            }
            if self.tail.den.eval(k) == 0.0 {
                return Err(Error::RuleEval {
                    k,
                    msg: format!("rule `{}` has a vanishing denominator", self.src),
                });
            }
        }
        Ok(())
    }

    /// The sequence `k ↦ rule(k+1)`.
    pub fn shift_forward(&self) -> Rule {
        let overrides: BTreeMap<u64, f64> = self
            .overrides
            .iter()
            .filter(|(k, _)| **k >= 1)
            .map(|(k, v)| (k - 1, *v))
            .collect();
        let tail = self.tail.shift_forward();
        let mut out = Rule {
            overrides: BTreeMap::new(),
            tail,
            src: format!("shift({})", self.src),
        };
        for (k, v) in overrides {
            out = out.with_override(k, v);
        }
        out
    }

    pub fn source(&self) -> &str {
        &self.src
    }

    fn render(&self) -> String {
        if self.overrides.is_empty() {
            return self.src.clone();
        }
        let mut parts: Vec<String> = self
            .overrides
            .iter()
            .map(|(k, v)| format!("{}: {}", k, fmt_scalar(*v)))
            .collect();
        let tail_src = match self.src.split("tail:").last() {
            Some(t) if self.src.starts_with('{') => t.trim_end_matches('}').trim().to_string(),
            _ => self.src.clone(),
        };
        parts.push(format!("tail: {}", tail_src));
        format!("{{{}}}", parts.join(", "))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.src)
    }
}

fn fmt_scalar(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{}", v)
    }
}

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser {
            input,
            bytes: input.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::RuleParse {
            input: self.input.to_string(),
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<(), Error> {
        match self.peek() {
            Some(c) if c == b => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected `{}`", b as char))),
        }
    }

    fn parse_rule(&mut self) -> Result<Rule, Error> {
        self.skip_ws();
        let rule = match self.peek() {
            None => return Err(self.err("empty rule")),
            Some(b'{') => self.parse_piecewise()?,
            Some(b'c') if self.input[self.pos..].trim_start().starts_with("c:") => {
                self.pos = self.input.find("c:").unwrap() + 2;
                let v = self.parse_number()?;
                Rule::constant(v)
            }
            _ => {
                let src_start = self.pos;
                let rat = self.parse_rational()?;
                Rule::from_rational(rat, self.input[src_start..self.pos].trim().to_string())
            }
        };
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.err("trailing input after rule"));
        }
        rule.validate()?;
        Ok(rule)
    }

    fn parse_piecewise(&mut self) -> Result<Rule, Error> {
        self.expect(b'{')?;
        let mut overrides = BTreeMap::new();
        let tail;
        loop {
            self.skip_ws();
            if self.input[self.pos..].starts_with("tail") {
                self.pos += 4;
                self.expect(b':')?;
                let rat = self.parse_rational()?;
                tail = Some(rat);
                if self.peek() == Some(b',') {
                    self.pos += 1;
                }
                self.expect(b'}')?;
                break;
            }
            let k = self.parse_integer()? as u64;
            self.expect(b':')?;
            let v = self.parse_number()?;
            overrides.insert(k, v);
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                }
                Some(b'}') => {
                    return Err(self.err("piecewise rule needs a `tail:` entry"));
                }
                _ => return Err(self.err("expected `,` or `tail:`")),
            }
        }
        let tail = tail.ok_or_else(|| self.err("piecewise rule needs a `tail:` entry"))?;
        let src = {
            let mut parts: Vec<String> = overrides
                .iter()
                .map(|(k, v)| format!("{}: {}", k, fmt_scalar(*v)))
                .collect();
            parts.push(format!("tail: {}", render_rational(&tail)));
            format!("{{{}}}", parts.join(", "))
        };
        Ok(Rule {
            overrides,
            tail,
            src,
        })
    }

    fn parse_rational(&mut self) -> Result<RationalFn, Error> {
        let num = self.parse_poly()?;
        let den = if self.peek() == Some(b'/') {
            self.pos += 1;
            self.parse_poly_factor_level()?
        } else {
            Poly::constant(1.0)
        };
        if den.is_zero() {
            return Err(self.err("zero denominator"));
        }
        Ok(RationalFn { num, den })
    }

    fn parse_poly(&mut self) -> Result<Poly, Error> {
        let mut neg = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            neg = true;
        }
        let mut acc = self.parse_term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.parse_term()?;
                    acc = acc.add(&t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.parse_term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// After `/` the denominator is a single factor chain, so `a/b(k+1)`
    /// reads as `a / (b·(k+1))` — the natural reading of `k/(2(k+2))`.
    fn parse_poly_factor_level(&mut self) -> Result<Poly, Error> {
        self.parse_term()
    }

    fn parse_term(&mut self) -> Result<Poly, Error> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.parse_factor()?;
                    acc = acc.mul(&f);
                }
                Some(b'k') | Some(b'(') => {
                    let f = self.parse_factor()?;
                    acc = acc.mul(&f);
                }
                Some(c) if c.is_ascii_digit() => {
                    let f = self.parse_factor()?;
                    acc = acc.mul(&f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Poly, Error> {
        let base = match self.peek() {
            Some(b'k') => {
                self.pos += 1;
                Poly::from_coeffs(vec![0.0, 1.0])
            }
            Some(b'(') => {
                self.pos += 1;
                let p = self.parse_poly()?;
                self.expect(b')')?;
                p
            }
            Some(c) if c.is_ascii_digit() => Poly::constant(self.parse_integer()? as f64),
            _ => return Err(self.err("expected `k`, an integer, or `(`")),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.parse_integer()?;
            if !(0..=16).contains(&e) {
                return Err(self.err("exponent out of range 0..=16"));
            }
            let mut acc = Poly::constant(1.0);
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn parse_integer(&mut self) -> Result<i64, Error> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        self.input[start..self.pos]
            .parse::<i64>()
            .map_err(|_| self.err("expected an integer"))
    }

    fn parse_number(&mut self) -> Result<f64, Error> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.bytes.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.bytes.get(self.pos).is_some_and(|b| {
            b.is_ascii_digit() || *b == b'.' || *b == b'e' || *b == b'E' || *b == b'-' || *b == b'+'
        }) {
            // Stop a trailing sign that belongs to the outer expression.
            if matches!(self.bytes[self.pos], b'-' | b'+')
                && !matches!(self.bytes.get(self.pos - 1), Some(b'e') | Some(b'E'))
            {
                break;
            }
            self.pos += 1;
        }
        self.input[start..self.pos]
            .parse::<f64>()
            .map_err(|_| self.err("expected a number"))
            .and_then(|v| {
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(self.err("non-finite number"))
                }
            })
    }
}

fn render_rational(r: &RationalFn) -> String {
    fn render_poly(p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, &c) in p.coeffs.iter().enumerate().rev() {
            if c == 0.0 {
                continue;
            }
            let mag = c.abs();
            let var = match i {
                0 => String::new(),
                1 => "k".into(),
                _ => format!("k^{}", i),
            };
            let coeff = if mag == 1.0 && i > 0 {
                String::new()
            } else {
                fmt_scalar(mag)
            };
            let sign = if c < 0.0 {
                "-"
            } else if parts.is_empty() {
                ""
            } else {
                "+"
            };
            parts.push(format!("{}{}{}", sign, coeff, var));
        }
        parts.join("")
    }
    if r.den == Poly::constant(1.0) {
        render_poly(&r.num)
    } else {
        format!("({})/({})", render_poly(&r.num), render_poly(&r.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, k: u64) -> f64 {
        Rule::parse(s).unwrap().eval(k).unwrap()
    }

    #[test]
    fn parses_paper_schedules() {
        assert_eq!(ev("1/(k+3)", 5), 0.125);
        assert_eq!(ev("1/(k+2)", 5), 1.0 / 7.0);
        assert_eq!(ev("k/(k+2)", 5), 5.0 / 7.0);
        assert_eq!(ev("(k+1)/(2(k+2))", 0), 0.25);
        assert_eq!(ev("k/(2(k+2))", 0), 0.0);
        assert_eq!(ev("1/(k+2)^2", 0), 0.25);
        assert_eq!(ev("0", 17), 0.0);
        assert_eq!(ev("1", 17), 1.0);
        assert_eq!(ev("c:2.5", 3), 2.5);
    }

    #[test]
    fn piecewise_overrides_then_tail() {
        let r = Rule::parse("{0: 1, tail: k}").unwrap();
        assert_eq!(r.eval(0).unwrap(), 1.0);
        assert_eq!(r.eval(1).unwrap(), 1.0);
        assert_eq!(r.eval(5).unwrap(), 5.0);
        assert!(r.stable_from() >= 1);
    }

    #[test]
    fn rejects_malformed_rules() {
        assert!(Rule::parse("").is_err());
        assert!(Rule::parse("1/(k-3)").is_err()); // vanishes at k = 3
        assert!(Rule::parse("k+").is_err());
        assert!(Rule::parse("{0: 1}").is_err()); // no tail
        assert!(Rule::parse("2.5").is_err()); // decimals need the c: form
    }

    #[test]
    fn rational_arithmetic_stays_exact() {
        let beta = Rule::parse("1/(k+2)").unwrap();
        let gamma = Rule::parse("k/(k+2)").unwrap();
        // 1 - beta - gamma = 1/(k+2)
        let defect = RationalFn::constant(1.0).sub(beta.tail()).sub(gamma.tail());
        for k in 0..50 {
            let expected = 1.0 / (k as f64 + 2.0);
            assert!((defect.eval(k).unwrap() - expected).abs() < 1e-15);
        }
        assert_eq!(defect.limit(), Limit::Finite(0.0));
        assert!(!defect.abs_summable());
        assert_eq!(defect.eventual_sign(), 1);
    }

    #[test]
    fn summability_by_degree_gap() {
        assert!(Rule::parse("1/(k+2)^2").unwrap().tail().abs_summable());
        assert!(!Rule::parse("1/(k+2)").unwrap().tail().abs_summable());
        assert!(Rule::parse("0").unwrap().tail().abs_summable());
        assert_eq!(
            Rule::parse("k/(k+2)").unwrap().tail().limit(),
            Limit::Finite(1.0)
        );
        assert_eq!(
            Rule::parse("k").unwrap().tail().limit(),
            Limit::PlusInfinity
        );
    }

    #[test]
    fn eventual_sign_and_stability() {
        let r = Rule::parse("(k-10)/(k+1)").unwrap();
        assert_eq!(r.tail().eventual_sign(), 1);
        assert!(r.stable_from() >= 11);
        assert!(r.eval(5).unwrap() < 0.0);
        assert!(r.eval(r.stable_from()).unwrap() > 0.0);
    }

    #[test]
    fn overflow_guard() {
        let r = Rule::parse("k^8").unwrap();
        assert!(r.eval(10).is_ok());
        assert!(r.eval(1_000_000_000).is_err());
    }

    #[test]
    fn shift_forward_matches_pointwise() {
        for src in [
            "1/(k+3)",
            "k/(k+2)",
            "(k+1)/(2(k+2))",
            "{0: 1, 2: 5, tail: k}",
        ] {
            let r = Rule::parse(src).unwrap();
            let s = r.shift_forward();
            for k in 0..40 {
                assert_eq!(
                    s.eval(k).unwrap(),
                    r.eval(k + 1).unwrap(),
                    "rule {src} at {k}"
                );
            }
        }
    }
}
