//! Recursive-descent parser for scalar expressions and element literals.
//!
//! Precedence, loosest first: `+ -`, `* /`, `^`, unary minus. `^` associates
//! left; between elements it is the wedge product, between scalars an
//! integer power.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exterior::{GradedElement, Variance};
use crate::symbolic::{Chart, Rational, RationalFunction};

/// Result of parsing: a function or a form/multivector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Value {
    Scalar(RationalFunction),
    Element(GradedElement),
}

impl Value {
    pub fn into_scalar(self) -> Result<RationalFunction> {
        match self {
            Value::Scalar(f) => Ok(f),
            Value::Element(e) if e.is_homogeneous_of(0) => Ok(e.scalar_part()),
            Value::Element(_) => Err(Error::InvalidArgument("expected a function".into())),
        }
    }

    /// Promotes scalars to degree-0 elements of the requested variance.
    pub fn into_element(self, chart: &Arc<Chart>, variance: Variance) -> Result<GradedElement> {
        match self {
            Value::Scalar(f) => Ok(GradedElement::scalar(chart, variance, f)),
            Value::Element(e) => {
                if e.is_zero() {
                    return Ok(GradedElement::zero(chart, variance));
                }
                e.expect_variance(variance)?;
                Ok(e)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Vector(String),
    Op(char),
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let ident_end = |mut j: usize| {
        while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
            j += 1;
        }
        j
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let mut digits: String = chars[start..i].iter().collect();
            let mut scale = 0u32;
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                let frac_start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                scale = (i - frac_start) as u32;
                digits.extend(&chars[frac_start..i]);
            }
            if digits.is_empty() {
                return Err(syntax(start, "malformed number"));
            }
            let n: BigInt = digits.parse().map_err(|_| syntax(start, "malformed number"))?;
            out.push((start, Tok::Num(Rational::new(n, BigInt::from(10).pow(scale)))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let end = ident_end(i);
            out.push((i, Tok::Ident(chars[i..end].iter().collect())));
            i = end;
        } else if c == '@' {
            let end = ident_end(i + 1);
            if end == i + 1 {
                return Err(syntax(i, "expected a coordinate name after `@`"));
            }
            out.push((i, Tok::Vector(chars[i + 1..end].iter().collect())));
            i = end;
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(syntax(i, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    chart: &'a Arc<Chart>,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(p, _)| *p)
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        loop {
            let at = self.offset();
            if self.eat_op('+') {
                let rhs = self.term()?;
                acc = self.add(acc, rhs, false, at)?;
            } else if self.eat_op('-') {
                let rhs = self.term()?;
                acc = self.add(acc, rhs, true, at)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.power()?;
        loop {
            let at = self.offset();
            if self.eat_op('*') {
                let rhs = self.power()?;
                acc = self.mul(acc, rhs, at)?;
            } else if self.eat_op('/') {
                let rhs = self.power()?;
                acc = self.div(acc, rhs, at)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            let at = self.offset();
            if !self.eat_op('^') {
                return Ok(acc);
            }
            let rhs = self.unary()?;
            acc = self.caret(acc, rhs, at)?;
        }
    }

    fn unary(&mut self) -> Result<Value> {
        if self.eat_op('-') {
            return Ok(match self.unary()? {
                Value::Scalar(f) => Value::Scalar(-f),
                Value::Element(e) => Value::Element(-e),
            });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Value> {
        let at = self.offset();
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return Err(syntax(at, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(c) => Ok(Value::Scalar(self.chart.constant(c))),
            Tok::Op('(') => {
                let v = self.expr()?;
                if !self.eat_op(')') {
                    return Err(syntax(self.offset(), "expected `)`"));
                }
                Ok(v)
            }
            Tok::Op(c) => Err(syntax(at, format!("unexpected `{c}`"))),
            Tok::Vector(name) => {
                let i = self.chart.coordinate_index(&name)?;
                Ok(Value::Element(GradedElement::coordinate_vector(self.chart, i)))
            }
            Tok::Ident(name) => {
                if let Some(i) = self.chart.variable_index(&name) {
                    return Ok(Value::Scalar(RationalFunction::variable(self.chart.nvars(), i)));
                }
                if let Some(rest) = name.strip_prefix('d') {
                    if let Ok(i) = self.chart.coordinate_index(rest) {
                        return Ok(Value::Element(GradedElement::coordinate_form(self.chart, i)));
                    }
                }
                Err(Error::UnknownName(name))
            }
        }
    }

    fn add(&self, a: Value, b: Value, subtract: bool, at: usize) -> Result<Value> {
        let b = match b {
            Value::Scalar(f) if subtract => Value::Scalar(-f),
            Value::Element(e) if subtract => Value::Element(-e),
            v => v,
        };
        Ok(match (a, b) {
            (Value::Scalar(f), Value::Scalar(g)) => Value::Scalar(&f + &g),
            (Value::Scalar(f), Value::Element(e)) | (Value::Element(e), Value::Scalar(f)) => {
                Value::Element(&e + &GradedElement::scalar(self.chart, e.variance(), f))
            }
            (Value::Element(e), Value::Element(g)) => {
                if e.variance() != g.variance() {
                    return Err(syntax(at, "cannot add a form and a multivector"));
                }
                Value::Element(&e + &g)
            }
        })
    }

    fn mul(&self, a: Value, b: Value, at: usize) -> Result<Value> {
        Ok(match (a, b) {
            (Value::Scalar(f), Value::Scalar(g)) => Value::Scalar(&f * &g),
            (Value::Scalar(f), Value::Element(e)) | (Value::Element(e), Value::Scalar(f)) => {
                Value::Element(e.scale(&f))
            }
            (Value::Element(_), Value::Element(_)) => {
                return Err(syntax(at, "use `^` for the wedge product"));
            }
        })
    }

    fn div(&self, a: Value, b: Value, at: usize) -> Result<Value> {
        let Value::Scalar(g) = b else {
            return Err(syntax(at, "cannot divide by a form or multivector"));
        };
        let inv = g.inv()?;
        self.mul(a, Value::Scalar(inv), at)
    }

    fn caret(&self, a: Value, b: Value, at: usize) -> Result<Value> {
        match (a, b) {
            (Value::Scalar(f), Value::Scalar(g)) => {
                let e = g
                    .constant_value()
                    .filter(|c| c.is_integer())
                    .and_then(|c| c.numer().to_i32())
                    .ok_or_else(|| syntax(at, "exponent must be an integer constant"))?;
                if e < 0 && f.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Value::Scalar(f.pow(e)?))
            }
            (Value::Element(e), Value::Element(g)) => {
                if e.variance() != g.variance() {
                    return Err(syntax(at, "cannot wedge a form with a multivector"));
                }
                Ok(Value::Element(e.wedge(&g)?))
            }
            _ => Err(syntax(at, "`^` needs two scalars or two elements")),
        }
    }
}

/// Parses an expression over the chart's coordinates and parameters.
pub fn parse(text: &str, chart: &Arc<Chart>) -> Result<Value> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        chart,
        toks,
        pos: 0,
        len: text.chars().count(),
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(v)
}

pub fn parse_function(text: &str, chart: &Arc<Chart>) -> Result<RationalFunction> {
    parse(text, chart)?.into_scalar()
}

pub fn parse_element(text: &str, chart: &Arc<Chart>, variance: Variance) -> Result<GradedElement> {
    parse(text, chart)?.into_element(chart, variance)
}

/// Parses a multivector; zero parses as the zero multivector.
pub fn parse_multivector(text: &str, chart: &Arc<Chart>) -> Result<GradedElement> {
    parse_element(text, chart, Variance::Multivector)
}

pub fn parse_form(text: &str, chart: &Arc<Chart>) -> Result<GradedElement> {
    parse_element(text, chart, Variance::Form)
}
