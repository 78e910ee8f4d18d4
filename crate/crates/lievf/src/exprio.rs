//! Polynomial text grammar, canonical formatting and JSON report documents.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | integer '/' integer | variable | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. A `p/q` literal is a single token; there is no
//! division operator and no implicit multiplication.

use lievf_core::poly::{Monomial, Rat, SparsePoly};
use lievf_core::{Poly2, Poly4, VectorField2};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

pub const VARS2: [&str; 2] = ["x", "y"];
pub const VARS4: [&str; 4] = ["x", "y", "z", "w"];

/// Exponents above this are rejected to keep expansion bounded.
pub const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable '{name}' at position {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("negative exponent at position {position}")]
    NegativeExponent { position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::UnknownVariable { position, .. }
            | ParseError::NegativeExponent { position } => *position,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "SyntaxError",
            ParseError::UnknownVariable { .. } => "UnknownVariable",
            ParseError::NegativeExponent { .. } => "NegativeExponent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    P,
    Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("component {component:?}: {error}")]
pub struct FieldParseError {
    pub component: Component,
    pub error: ParseError,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Rational(BigInt, BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

fn syntax(position: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        position,
        message: message.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let skip_ws = |mut i: usize| {
        while i < chars.len() && chars[i].1.is_whitespace() {
            i += 1;
        }
        i
    };
    let digits = |mut i: usize| {
        let start = i;
        while i < chars.len() && chars[i].1.is_ascii_digit() {
            i += 1;
        }
        let s: String = chars[start..i].iter().map(|c| c.1).collect();
        (s, i)
    };
    loop {
        i = skip_ws(i);
        let Some(&(pos, c)) = chars.get(i) else {
            out.push((Tok::End, src.len()));
            return Ok(out);
        };
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, pos));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let (num, j) = digits(i);
            let n: BigInt = num.parse().expect("digit run");
            let k = skip_ws(j);
            if chars.get(k).is_some_and(|c| c.1 == '/') {
                let m = skip_ws(k + 1);
                let (den, e) = digits(m);
                if den.is_empty() {
                    let at = chars.get(m).map_or(src.len(), |c| c.0);
                    return Err(syntax(at, "expected denominator after '/'"));
                }
                let d: BigInt = den.parse().expect("digit run");
                if d.is_zero() {
                    return Err(syntax(chars[m].0, "zero denominator"));
                }
                out.push((Tok::Rational(n, d), pos));
                i = e;
            } else {
                out.push((Tok::Num(n), pos));
                i = j;
            }
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let name: String = chars[start..i].iter().map(|c| c.1).collect();
            out.push((Tok::Ident(name), pos));
            continue;
        }
        if c == '/' {
            return Err(syntax(pos, "'/' is only allowed inside a rational literal"));
        }
        return Err(syntax(pos, format!("unexpected character '{c}'")));
    }
}

struct Parser<'a, const V: usize> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    vars: &'a [&'a str; V],
}

impl<const V: usize> Parser<'_, V> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<SparsePoly<V>, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SparsePoly<V>, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<SparsePoly<V>, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<SparsePoly<V>, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump().0 {
            Tok::Minus => Err(ParseError::NegativeExponent { position: pos }),
            Tok::Num(n) => {
                let e = u32::try_from(&n)
                    .ok()
                    .filter(|e| *e <= MAX_EXPONENT)
                    .ok_or_else(|| syntax(pos, format!("exponent exceeds {MAX_EXPONENT}")))?;
                Ok(base.pow(e))
            }
            _ => Err(syntax(pos, "expected a non-negative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<SparsePoly<V>, ParseError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Num(n) => Ok(SparsePoly::constant(Rat::from_integer(n))),
            Tok::Rational(n, d) => Ok(SparsePoly::constant(Rat::new(n, d))),
            Tok::Ident(name) => match self.vars.iter().position(|v| *v == name) {
                Some(k) => Ok(SparsePoly::var(k)),
                None => Err(ParseError::UnknownVariable {
                    name,
                    position: pos,
                }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.pos();
                match self.bump().0 {
                    Tok::RParen => Ok(inner),
                    _ => Err(syntax(close, "expected ')'")),
                }
            }
            Tok::End => Err(syntax(pos, "unexpected end of input")),
            other => Err(syntax(pos, format!("unexpected {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Num(_) | Tok::Rational(..) => "number",
        Tok::Ident(_) => "variable",
        Tok::Plus => "'+'",
        Tok::Minus => "'-'",
        Tok::Star => "'*'",
        Tok::Caret => "'^'",
        Tok::LParen => "'('",
        Tok::RParen => "')'",
        Tok::End => "end of input",
    }
}

/// Parses a polynomial over the given variable names.
pub fn parse_poly_in<const V: usize>(
    src: &str,
    vars: &[&str; V],
) -> Result<SparsePoly<V>, ParseError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        at: 0,
        vars,
    };
    let out = p.expr()?;
    match p.peek() {
        Tok::End => Ok(out),
        t => Err(syntax(
            p.pos(),
            format!("expected operator, found {}", describe(t)),
        )),
    }
}

pub fn parse_poly(src: &str) -> Result<Poly2, ParseError> {
    parse_poly_in(src, &VARS2)
}

pub fn parse_poly4(src: &str) -> Result<Poly4, ParseError> {
    parse_poly_in(src, &VARS4)
}

pub fn parse_field(p: &str, q: &str) -> Result<VectorField2, FieldParseError> {
    let tag = |component| move |error| FieldParseError { component, error };
    Ok(VectorField2::new(
        parse_poly(p).map_err(tag(Component::P))?,
        parse_poly(q).map_err(tag(Component::Q))?,
    ))
}

/// Parses `p`, `p/q` or `-p/q`.
pub fn parse_rat(src: &str) -> Result<Rat, ParseError> {
    let p = parse_poly_in::<2>(src, &VARS2)?;
    match p.degree() {
        None => Ok(Rat::zero()),
        Some(0) => Ok(p.coeff(&Monomial([0, 0]))),
        Some(_) => Err(syntax(0, "expected a rational constant")),
    }
}

pub fn format_poly<const V: usize>(p: &SparsePoly<V>) -> String {
    p.to_canonical_string()
}

pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal text with 17 significant digits; exponent form outside
/// `[1e-5, 1e17)`.
pub fn format_float(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "NaN".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return "0.0000000000000000".into();
    }
    let sci = format!("{v:.16e}");
    let exp: i32 = sci[sci.find('e').expect("exponent form") + 1..]
        .parse()
        .expect("integer exponent");
    if !(-5..17).contains(&exp) {
        return sci;
    }
    let decimals = (16 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

pub fn rat_value(r: &Rat) -> Value {
    Value::String(format_rat(r))
}

pub fn float_value(v: f64) -> Value {
    Value::String(format_float(v))
}

pub fn poly_value<const V: usize>(p: &SparsePoly<V>) -> Value {
    Value::String(format_poly(p))
}

pub fn field_value(f: &VectorField2) -> Value {
    json!({ "P": format_poly(&f.p), "Q": format_poly(&f.q) })
}

pub const REPORT_VERSION: &str = concat!("lievf-report/", env!("CARGO_PKG_VERSION"));

/// `{ "command", "inputs", "result", "version" }`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportDocument {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub result: Map<String, Value>,
    pub version: String,
}

impl ReportDocument {
    pub fn new(command: &str) -> Self {
        ReportDocument {
            command: command.to_string(),
            inputs: Map::new(),
            result: Map::new(),
            version: REPORT_VERSION.to_string(),
        }
    }

    pub fn input(mut self, key: &str, value: Value) -> Self {
        self.inputs.insert(key.to_string(), value);
        self
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.result.insert(key.to_string(), value);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// JSON Schema of every report document.
pub const REPORT_SCHEMA: &str = r#"{
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "lievf report",
  "type": "object",
  "required": ["command", "inputs", "result", "version"],
  "additionalProperties": false,
  "properties": {
    "command": { "type": "string" },
    "inputs": { "type": "object" },
    "result": { "type": "object" },
    "version": { "type": "string" }
  }
}"#;

/// Checks a parsed document against [`REPORT_SCHEMA`].
pub fn validate_report(doc: &Value) -> Result<(), String> {
    let obj = doc.as_object().ok_or("report is not an object")?;
    for (key, ok) in [
        ("command", obj.get("command").is_some_and(Value::is_string)),
        ("inputs", obj.get("inputs").is_some_and(Value::is_object)),
        ("result", obj.get("result").is_some_and(Value::is_object)),
        ("version", obj.get("version").is_some_and(Value::is_string)),
    ] {
        if !ok {
            return Err(format!("missing or mistyped key '{key}'"));
        }
    }
    if let Some(extra) = obj
        .keys()
        .find(|k| !["command", "inputs", "result", "version"].contains(&k.as_str()))
    {
        return Err(format!("unexpected key '{extra}'"));
    }
    Ok(())
}
