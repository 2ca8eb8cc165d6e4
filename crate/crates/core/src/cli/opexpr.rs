//! Operator expressions, in the same syntax that [`GradedOperator`] prints.
//!
//! ```text
//! op     := term (('+' | '-') term)*
//! term   := atom ('.' atom)*                 composition, rightmost applied first
//! atom   := 'd' | 'i(' MV ')' | 'iv(' MV ',' FORM ')' | 'mu(' FORM ')' | 'L(' MV ')'
//!         | '[' op ',' op ']' | '(' op ')' | RATIONAL '*' atom | '(' RATIONAL ')' '*' atom | '0'
//! ```
//!
//! `MV` and `FORM` are element expressions handed to the element parser.

use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exterior::MultivectorOneForm;
use crate::operator::{GradedOperator, OpKind};
use crate::parse::{parse_form, parse_multivector};
use crate::symbolic::{Chart, Rational};

pub fn parse_operator(text: &str, chart: &Arc<Chart>) -> Result<GradedOperator> {
    let mut p = OpParser { s: text, pos: 0, chart };
    let op = p.sum()?;
    p.ws();
    if p.pos < p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(op)
}

struct OpParser<'a> {
    s: &'a str,
    pos: usize,
    chart: &'a Arc<Chart>,
}

fn is_zero(op: &GradedOperator) -> bool {
    matches!(op.kind(), OpKind::Zero)
}

impl OpParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn rest(&self) -> &str {
        &self.s[self.pos..]
    }

    fn ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.s.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{tok}`")))
        }
    }

    /// Text up to the first of `stops` outside brackets; the stop itself is not consumed.
    fn balanced(&mut self, stops: &[char]) -> Result<&str> {
        let start = self.pos;
        let mut depth = 0i32;
        for (i, ch) in self.rest().char_indices() {
            if depth == 0 && stops.contains(&ch) {
                self.pos = start + i;
                return Ok(&self.s[start..start + i]);
            }
            match ch {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                _ => {}
            }
        }
        Err(self.err("unbalanced brackets"))
    }

    fn element_arg(&mut self, stop: char) -> Result<String> {
        let pos = self.pos;
        let text = self.balanced(&[stop])?.to_string();
        if text.trim().is_empty() {
            return Err(Error::Syntax {
                pos,
                msg: "empty argument".into(),
            });
        }
        self.pos += stop.len_utf8();
        Ok(text)
    }

    fn combine(&self, a: GradedOperator, b: GradedOperator, minus: bool) -> Result<GradedOperator> {
        let b = if minus { b.scale(&-Rational::from_integer(1.into())) } else { b };
        match (is_zero(&a), is_zero(&b)) {
            (true, _) => Ok(b),
            (_, true) => Ok(a),
            _ => a.add(&b),
        }
    }

    fn sum(&mut self) -> Result<GradedOperator> {
        let mut acc = self.term()?;
        loop {
            if self.eat("+") {
                let t = self.term()?;
                acc = self.combine(acc, t, false)?;
            } else if self.eat("-") {
                let t = self.term()?;
                acc = self.combine(acc, t, true)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<GradedOperator> {
        let mut acc = self.atom()?;
        while self.eat(".") {
            let rhs = self.atom()?;
            acc = GradedOperator::compose(&acc, &rhs)?;
        }
        Ok(acc)
    }

    fn rational_literal(&mut self) -> Option<Rational> {
        let rest = self.rest();
        let end = rest
            .find(|c: char| !(c.is_ascii_digit() || c == '/' || c == '-'))
            .unwrap_or(rest.len());
        let r = Rational::from_str(&rest[..end]).ok()?;
        self.pos += end;
        Some(r)
    }

    fn atom(&mut self) -> Result<GradedOperator> {
        self.ws();
        let chart = self.chart;
        let rest = self.rest();
        let ident_end = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        let word = &rest[..ident_end];
        let after = rest[ident_end..].trim_start();
        match word {
            "d" => {
                self.pos += 1;
                return Ok(GradedOperator::d(chart));
            }
            "i" | "L" | "mu" | "iv" if after.starts_with('(') => {
                let word = word.to_string();
                self.pos += ident_end;
                self.expect("(")?;
                return match word.as_str() {
                    "i" => GradedOperator::insert(&parse_multivector(&self.element_arg(')')?, chart)?),
                    "L" => GradedOperator::lie(&parse_multivector(&self.element_arg(')')?, chart)?),
                    "mu" => GradedOperator::mul(&parse_form(&self.element_arg(')')?, chart)?),
                    _ => {
                        let p = parse_multivector(&self.element_arg(',')?, chart)?;
                        let a = parse_form(&self.element_arg(')')?, chart)?;
                        Ok(GradedOperator::insert_mixed(&MultivectorOneForm::tensor(&p, &a)?))
                    }
                };
            }
            _ => {}
        }
        if self.eat("[") {
            let a = self.sum()?;
            self.expect(",")?;
            let b = self.sum()?;
            self.expect("]")?;
            return GradedOperator::commutator(&a, &b);
        }
        if self.eat("(") {
            let save = self.pos;
            self.ws();
            if let Some(c) = self.rational_literal() {
                if self.eat(")") && self.eat("*") {
                    return Ok(self.atom()?.scale(&c));
                }
            }
            self.pos = save;
            let inner = self.sum()?;
            self.expect(")")?;
            return Ok(inner);
        }
        if let Some(c) = self.rational_literal() {
            if self.eat("*") {
                return Ok(self.atom()?.scale(&c));
            }
            if c.numer() == &0.into() {
                return Ok(GradedOperator::zero(chart, 0));
            }
            return Err(self.err("a number must multiply an operator"));
        }
        Err(self.err("expected an operator"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::format_element;

    fn chart() -> Arc<Chart> {
        Arc::new(Chart::with_coordinates(&["x", "y", "z"]).unwrap())
    }

    #[test]
    fn display_round_trip() {
        let c = chart();
        for text in [
            "d",
            "i(@x^@y)",
            "L(z*@x^@y)",
            "mu(x*dy)",
            "[L(@x^@y), mu(x)]",
            "(i(@x)).(L(y*@z))",
            "(3/2)*(d)",
            "iv(@x^@y, dx + 2*dz)",
            "L(@x^@y) + i(@z)",
            "[[L(@x^@y^@z), mu(dx)], d]",
        ] {
            let op = parse_operator(text, &c).unwrap();
            let again = parse_operator(&op.to_string(), &c).unwrap();
            assert_eq!(op.to_string(), again.to_string(), "{text}");
        }
    }

    #[test]
    fn evaluation() {
        let c = chart();
        let w = parse_form("y*dx", &c).unwrap();
        let op = parse_operator("L(@x^@y)", &c).unwrap();
        assert_eq!(format_element(&op.apply(&w).unwrap()), "-1");
        let op = parse_operator("[L(@x^@y), mu(x)]", &c).unwrap();
        let w = parse_form("dy", &c).unwrap();
        // [L_P, μ_x] = i_(i_dx P) = i_(@y)
        assert_eq!(format_element(&op.apply(&w).unwrap()), "1");
        let op = parse_operator("2*d - d", &c).unwrap();
        let f = parse_form("x*y", &c).unwrap();
        assert_eq!(op.apply(&f).unwrap(), parse_form("y*dx + x*dy", &c).unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let c = chart();
        assert!(matches!(parse_operator("L(@x", &c), Err(Error::Syntax { .. })));
        assert!(matches!(parse_operator("d d", &c), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_operator("L(@q)", &c), Err(Error::UnknownName(_))));
        assert!(parse_operator("d + i(@x)", &c).is_err());
    }
}
