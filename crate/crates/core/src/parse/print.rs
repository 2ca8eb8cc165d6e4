//! Canonical text output that the parser reads back.

use num_traits::{One, Signed};

use crate::exterior::{Blade, GradedElement, Variance};
use crate::symbolic::{Chart, Monomial, Polynomial, Rational, RationalFunction};

fn format_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Variables of a monomial as `x^2*y`; empty for the unit monomial.
fn format_monomial(m: &Monomial, chart: &Chart) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(chart.variable_name(i).to_string()),
            _ => parts.push(format!("{}^{}", chart.variable_name(i), e)),
        }
    }
    parts.join("*")
}

/// Leading exponent of the first variable appearing in `m`.
fn first_exponent(m: &Monomial) -> u32 {
    m.exponents().iter().copied().find(|&e| e > 0).unwrap_or(0)
}

pub fn format_polynomial(p: &Polynomial, chart: &Chart) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        let mono = format_monomial(m, chart);
        let body = if mono.is_empty() {
            format_rational(&abs)
        } else if abs.is_one() {
            // a bare leading "-x^2" would read as (-x)^2
            if k == 0 && neg && first_exponent(m) > 1 {
                format!("1*{mono}")
            } else {
                mono
            }
        } else {
            format!("{}*{mono}", format_rational(&abs))
        };
        match (k, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}

/// True when `p` prints as a single factor safe to the right of `/`.
fn is_atomic_denominator(p: &Polynomial) -> bool {
    match p.leading_term() {
        Some((m, c)) if p.num_terms() == 1 && c.is_one() => {
            m.exponents().iter().filter(|&&e| e > 0).count() <= 1
        }
        _ => false,
    }
}

pub fn format_rational_function(f: &RationalFunction, chart: &Chart) -> String {
    let num = format_polynomial(f.numerator(), chart);
    if f.is_polynomial() {
        return num;
    }
    let num = if f.numerator().num_terms() > 1 {
        format!("({num})")
    } else {
        num
    };
    let den = format_polynomial(f.denominator(), chart);
    if is_atomic_denominator(f.denominator()) {
        format!("{num}/{den}")
    } else {
        format!("{num}/({den})")
    }
}

fn format_blade(b: Blade, variance: Variance, chart: &Chart) -> String {
    let prefix = match variance {
        Variance::Form => "d",
        Variance::Multivector => "@",
    };
    b.indices()
        .map(|i| format!("{prefix}{}", chart.variable_name(i)))
        .collect::<Vec<_>>()
        .join("^")
}

pub fn format_element(e: &GradedElement) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let chart = e.chart();
    let mut out = String::new();
    for (k, (b, c)) in e.terms().enumerate() {
        let single = c.is_polynomial() && c.numerator().num_terms() == 1;
        let neg = single && c.is_negative_leading();
        let coeff = if neg { -c } else { c.clone() };
        let body = if b.grade() == 0 {
            let s = format_rational_function(&coeff, chart);
            if neg || k == 0 || single {
                s
            } else {
                format!("({s})")
            }
        } else {
            let blade = format_blade(*b, e.variance(), chart);
            if coeff.is_one() {
                blade
            } else if single {
                format!("{}*{blade}", format_rational_function(&coeff, chart))
            } else {
                format!("({})*{blade}", format_rational_function(&coeff, chart))
            }
        };
        match (k, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                // keep "-x^2*dy" from reading as (-x)^2
                let lead = coeff.numerator().leading_term().expect("nonzero");
                if lead.1.is_one() && first_exponent(lead.0) > 1 {
                    out.push_str("-1*");
                } else {
                    out.push('-');
                }
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}
