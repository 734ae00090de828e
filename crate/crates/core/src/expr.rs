//! Text grammar for elements, and model documents.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := ('+' | '-')* power ('*' power)*
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | name | '(' expr ')'
//! ```
//!
//! Juxtaposition is not multiplication: `2x2` is a syntax error.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Element, Generator, GradedAlgebra, Monomial};
use crate::cdga::{CdgaError, FreeCdga};
use crate::linalg::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown generator `{name}` at position {pos}")]
    UnknownGenerator { name: String, pos: usize },
    #[error(
        "exponent {exp} on odd generator `{name}` at position {pos}; write 0 for the zero element"
    )]
    OddPower { name: String, exp: u32, pos: usize },
    #[error("exponent at position {pos} must be a positive integer")]
    BadExponent { pos: usize },
    #[error("zero denominator at position {pos}")]
    ZeroDenominator { pos: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Num(BigInt),
    Name(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>, ExprError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((pos, Token::Num(digits.parse().expect("ascii digits"))));
        } else if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((
                pos,
                Token::Name(chars[start..i].iter().map(|&(_, c)| c).collect()),
            ));
        } else if "+-*^/()".contains(ch) {
            out.push((pos, Token::Sym(ch)));
            i += 1;
        } else {
            return Err(ExprError::Syntax {
                pos,
                message: format!("unexpected character `{ch}`"),
            });
        }
    }
    Ok(out)
}

const MAX_NESTING: usize = 256;

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    next: usize,
    end: usize,
    depth: usize,
    algebra: &'a GradedAlgebra,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.next).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.next).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, sym: char) -> bool {
        if self.peek() == Some(&Token::Sym(sym)) {
            self.next += 1;
            true
        } else {
            false
        }
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Element, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Element, ExprError> {
        let mut negate = false;
        loop {
            if self.eat('-') {
                negate = !negate;
            } else if !self.eat('+') {
                break;
            }
        }
        let mut acc = self.power()?;
        while self.eat('*') {
            let rhs = self.power()?;
            acc = self.algebra.mul(&acc, &rhs)?;
        }
        Ok(if negate { -acc } else { acc })
    }

    fn power(&mut self) -> Result<Element, ExprError> {
        let (base, odd_name) = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        let exp = match self.peek() {
            Some(Token::Num(v)) => {
                let v = v.clone();
                self.next += 1;
                u32::try_from(v)
                    .ok()
                    .filter(|&e| e > 0)
                    .ok_or(ExprError::BadExponent { pos })?
            }
            _ => return Err(ExprError::BadExponent { pos }),
        };
        if let Some(name) = odd_name {
            if exp > 1 {
                return Err(ExprError::OddPower { name, exp, pos });
            }
        }
        Ok(self.algebra.pow(&base, exp)?)
    }

    /// Parses an atom. The second component names the generator when the
    /// atom is a bare odd generator.
    fn atom(&mut self) -> Result<(Element, Option<String>), ExprError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Token::Num(numer)) => {
                self.next += 1;
                let mut value = Rational::from_integer(numer);
                if self.eat('/') {
                    let dpos = self.pos();
                    match self.peek().cloned() {
                        Some(Token::Num(denom)) => {
                            self.next += 1;
                            if denom.is_zero() {
                                return Err(ExprError::ZeroDenominator { pos: dpos });
                            }
                            value /= Rational::from_integer(denom);
                        }
                        _ => return self.syntax("expected an integer denominator"),
                    }
                }
                self.reject_juxtaposition()?;
                Ok((Element::constant(value), None))
            }
            Some(Token::Name(name)) => {
                self.next += 1;
                let index =
                    self.algebra
                        .index_of(&name)
                        .map_err(|_| ExprError::UnknownGenerator {
                            name: name.clone(),
                            pos,
                        })?;
                self.reject_juxtaposition()?;
                let odd = self.algebra.is_odd(index).then_some(name);
                Ok((
                    Element::term(self.algebra.generator_monomial(index), Rational::one()),
                    odd,
                ))
            }
            Some(Token::Sym('(')) => {
                if self.depth == MAX_NESTING {
                    return self.syntax("parentheses nested too deeply");
                }
                self.next += 1;
                self.depth += 1;
                let inner = self.expr()?;
                self.depth -= 1;
                if !self.eat(')') {
                    return self.syntax("expected `)`");
                }
                self.reject_juxtaposition()?;
                Ok((inner, None))
            }
            Some(Token::Sym(c)) => self.syntax(format!("unexpected `{c}`")),
            None => self.syntax("unexpected end of input"),
        }
    }

    fn reject_juxtaposition(&self) -> Result<(), ExprError> {
        match self.peek() {
            Some(Token::Num(_) | Token::Name(_)) | Some(Token::Sym('(')) => {
                self.syntax("missing operator; write `*` for multiplication")
            }
            _ => Ok(()),
        }
    }
}

/// Parses an expression over the generators of `algebra`.
pub fn parse_element(src: &str, algebra: &GradedAlgebra) -> Result<Element, ExprError> {
    let mut parser = Parser {
        tokens: tokenize(src)?,
        next: 0,
        end: src.len(),
        depth: 0,
        algebra,
    };
    let e = parser.expr()?;
    if parser.next < parser.tokens.len() {
        return parser.syntax("unexpected trailing input");
    }
    Ok(e)
}

/// Parses against a plain generator list.
pub fn parse_with_generators(src: &str, generators: &[Generator]) -> Result<Element, ExprError> {
    parse_element(src, &GradedAlgebra::new(generators.iter().cloned())?)
}

fn write_monomial(out: &mut String, algebra: &GradedAlgebra, m: &Monomial) {
    for (k, &(g, e)) in m.factors().iter().enumerate() {
        if k > 0 {
            out.push('*');
        }
        out.push_str(algebra.generator(g).name());
        if e > 1 {
            let _ = write!(out, "^{e}");
        }
    }
}

/// Canonical text: terms in monomial order, reduced coefficients, no `1*`.
pub fn print_element(algebra: &GradedAlgebra, e: &Element) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in e.terms().enumerate() {
        let magnitude = c.abs();
        match (i, c.is_negative()) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if m.is_one() {
            let _ = write!(out, "{magnitude}");
            continue;
        }
        if !magnitude.is_one() {
            let _ = write!(out, "{magnitude}*");
        }
        write_monomial(&mut out, algebra, m);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("malformed document: {0}")]
    Json(String),
    #[error("d({generator}): {source}")]
    Expression {
        generator: String,
        source: ExprError,
    },
    #[error("differential given for undeclared generator `{0}`")]
    UndeclaredDifferential(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cdga(#[from] CdgaError),
}

/// Serializable model: generators with degrees, nonzero differentials as
/// canonical expression strings, and free-form metadata.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ModelDocument {
    pub generators: Vec<(String, u32)>,
    #[serde(default)]
    pub differentials: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl ModelDocument {
    pub fn with_metadata(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.insert(key.into(), value.to_string());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Line format: `# key: value` metadata, one `generators:` line, then
    /// `d(name) = expr` for each nonzero differential in generator order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|(n, d)| format!("{n}({d})"))
            .collect();
        out.push_str("generators:");
        if !gens.is_empty() {
            let _ = write!(out, " {}", gens.join(", "));
        }
        out.push('\n');
        for (name, _) in &self.generators {
            if let Some(expr) = self.differentials.get(name) {
                let _ = writeln!(out, "d({name}) = {expr}");
            }
        }
        out
    }

    /// Parses either format; JSON is recognised by a leading `{`.
    pub fn parse(src: &str) -> Result<Self, DocumentError> {
        if src.trim_start().starts_with('{') {
            serde_json::from_str(src).map_err(|e| DocumentError::Json(e.to_string()))
        } else {
            Self::parse_text(src)
        }
    }

    fn parse_text(src: &str) -> Result<Self, DocumentError> {
        let mut doc = ModelDocument::default();
        let mut seen_generators = false;
        for (i, raw) in src.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| DocumentError::Line { line, message };
            let text = raw.trim();
            if text.is_empty() {
                continue;
            }
            if let Some(comment) = text.strip_prefix('#') {
                if let Some((k, v)) = comment.split_once(':') {
                    doc.metadata
                        .insert(k.trim().to_string(), v.trim().to_string());
                }
                continue;
            }
            if let Some(list) = text.strip_prefix("generators:") {
                if seen_generators {
                    return Err(err("second `generators:` line".into()));
                }
                seen_generators = true;
                for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let parsed = item
                        .strip_suffix(')')
                        .and_then(|s| s.split_once('('))
                        .and_then(|(n, d)| {
                            Some((n.trim().to_string(), d.trim().parse::<u32>().ok()?))
                        });
                    match parsed {
                        Some(g) => doc.generators.push(g),
                        None => {
                            return Err(err(format!("expected `name(degree)`, found `{item}`")))
                        }
                    }
                }
                continue;
            }
            if let Some(rest) = text.strip_prefix("d(") {
                let Some((name, rhs)) = rest.split_once(')') else {
                    return Err(err("expected `d(name) = expression`".into()));
                };
                let Some(expr) = rhs.trim_start().strip_prefix('=') else {
                    return Err(err("expected `=` after `d(name)`".into()));
                };
                let name = name.trim().to_string();
                if doc
                    .differentials
                    .insert(name.clone(), expr.trim().to_string())
                    .is_some()
                {
                    return Err(err(format!("d({name}) given twice")));
                }
                continue;
            }
            return Err(err(format!("unrecognised line `{text}`")));
        }
        if !seen_generators {
            return Err(DocumentError::Line {
                line: src.lines().count(),
                message: "missing `generators:` line".into(),
            });
        }
        Ok(doc)
    }
}

/// Builds and validates the model a document describes: names, degrees,
/// differential degrees and `d∘d = 0`.
pub fn load_model(doc: &ModelDocument) -> Result<FreeCdga, DocumentError> {
    let algebra = GradedAlgebra::new(
        doc.generators
            .iter()
            .map(|(n, d)| Generator::new(n.as_str(), *d))
            .collect::<Result<Vec<_>, _>>()?,
    )?;
    let mut differential = BTreeMap::new();
    for (name, src) in &doc.differentials {
        if !algebra.contains(name) {
            return Err(DocumentError::UndeclaredDifferential(name.clone()));
        }
        let e = parse_element(src, &algebra).map_err(|source| DocumentError::Expression {
            generator: name.clone(),
            source,
        })?;
        differential.insert(name.clone(), e);
    }
    Ok(FreeCdga::new(algebra, differential)?)
}

/// Canonical document for a model. Generators appear in canonical order and
/// only nonzero differentials are listed.
pub fn save_model(c: &FreeCdga) -> ModelDocument {
    let a = c.algebra();
    let generators = a
        .generators()
        .iter()
        .map(|g| (g.name().to_string(), g.degree()))
        .collect();
    let differentials = (0..a.len() as u32)
        .filter(|&i| !c.d_of(i).is_zero())
        .map(|i| {
            (
                a.generator(i).name().to_string(),
                print_element(a, c.d_of(i)),
            )
        })
        .collect();
    ModelDocument {
        generators,
        differentials,
        metadata: BTreeMap::new(),
    }
}
