//! Multivariate gcd over the rationals.
//!
//! Recursive primitive polynomial remainder sequences: the polynomials are
//! viewed as univariate in one shared variable with coefficients in the
//! remaining variables, contents are split off recursively and the primitive
//! parts are reduced with pseudo-remainders.
//!
//! Before that, a heuristic gcd is tried: evaluate one variable at a large
//! integer, recurse, rebuild the candidate from its ξ-adic digits and accept
//! it only if it divides both operands.

use super::polynomial::{Monomial, Polynomial, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Monic greatest common divisor. `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let nvars = a.nvars();
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.constant_value().is_some() || b.constant_value().is_some() {
        return Polynomial::one(nvars);
    }
    if a.num_terms() == 1 {
        return monomial_gcd(a, b);
    }
    if b.num_terms() == 1 {
        return monomial_gcd(b, a);
    }
    if a == b {
        return a.monic();
    }
    if let Some(g) = heuristic_gcd(&integral(a), &integral(b), 0) {
        return g.monic();
    }
    gcd_recursive(a, b).monic()
}

/// Rescales to integer coefficients.
fn integral(p: &Polynomial) -> Polynomial {
    let l = p
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    p.scale(&Rational::from_integer(l))
}

fn integer_content(p: &Polynomial) -> BigInt {
    p.terms().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c.numer()))
}

fn max_norm(p: &Polynomial) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

/// `p` with `var` set to `x`.
fn substitute(p: &Polynomial, var: usize, x: &BigInt) -> Polynomial {
    let mut powers: Vec<BigInt> = vec![BigInt::one()];
    Polynomial::from_terms(
        p.nvars(),
        p.terms().map(|(m, c)| {
            let e = m.exponents()[var] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * x;
                powers.push(next);
            }
            let mut exps = m.exponents().to_vec();
            exps[var] = 0;
            (Monomial::from_exponents(&exps), c * Rational::from_integer(powers[e].clone()))
        }),
    )
}

/// Inverse of `substitute` on the symmetric ξ-adic digits of every coefficient.
fn interpolate(h: &Polynomial, var: usize, x: &BigInt) -> Polynomial {
    let half = x / 2;
    let mut out = Polynomial::zero(h.nvars());
    for (m, c) in h.terms() {
        let mut v = c.numer().clone();
        let mut e = 0u32;
        while !v.is_zero() {
            let mut digit = v.mod_floor(x);
            if digit > half {
                digit -= x;
            }
            if !digit.is_zero() {
                let mut exps = m.exponents().to_vec();
                exps[var] = e;
                out.add_term(Monomial::from_exponents(&exps), &Rational::from_integer(digit.clone()));
            }
            v = (v - digit) / x;
            e += 1;
        }
    }
    out
}

/// Heuristic gcd of two integer polynomials, up to a unit. `None` means no candidate was confirmed.
fn heuristic_gcd(a: &Polynomial, b: &Polynomial, depth: usize) -> Option<Polynomial> {
    let nvars = a.nvars();
    if a.is_zero() || b.is_zero() || depth > nvars {
        return None;
    }
    let ca = integer_content(a);
    let cb = integer_content(b);
    let content = ca.gcd(&cb);
    let a = a.scale(&Rational::new(BigInt::one(), ca));
    let b = b.scale(&Rational::new(BigInt::one(), cb));
    let constant = Polynomial::constant(nvars, Rational::from_integer(content.clone()));
    if a.is_constant() || b.is_constant() {
        return Some(constant);
    }
    let (da, db) = (a.degrees(), b.degrees());
    let var = (0..nvars).find(|&v| da[v] > 0 || db[v] > 0)?;
    let (na, nb) = (max_norm(&a), max_norm(&b));
    let bound: BigInt = BigInt::from(2) * (&na).min(&nb) + 29;
    let lead = |p: &Polynomial, n: &BigInt| {
        let lc = p.to_univariate(var).last().map(max_norm).unwrap_or_else(BigInt::one);
        n / lc.max(BigInt::one())
    };
    let mut x = (&bound)
        .min(&(BigInt::from(99) * bound.sqrt()))
        .clone()
        .max(BigInt::from(2) * lead(&a, &na).min(lead(&b, &nb)) + 2);
    for _ in 0..6 {
        let ea = substitute(&a, var, &x);
        let eb = substitute(&b, var, &x);
        if !ea.is_zero() && !eb.is_zero() {
            if let Some(h) = heuristic_gcd(&ea, &eb, depth + 1) {
                let mut g = interpolate(&h, var, &x);
                if !g.is_zero() {
                    let c = integer_content(&g);
                    g = g.scale(&Rational::new(BigInt::one(), c));
                    if a.exact_div(&g).is_some() && b.exact_div(&g).is_some() {
                        return Some(&g * &constant);
                    }
                }
            }
        }
        x = BigInt::from(73794) * &x * x.sqrt().sqrt() / 27011;
    }
    None
}

fn monomial_gcd(mono: &Polynomial, other: &Polynomial) -> Polynomial {
    let (m, _) = mono.leading_term().unwrap();
    let mut g = m.clone();
    for (om, _) in other.terms() {
        g = g.gcd(om);
        if g.is_one() {
            break;
        }
    }
    Polynomial::monomial(g, Rational::one())
}

fn gcd_recursive(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let nvars = a.nvars();
    let da = a.degrees();
    let db = b.degrees();

    // A variable present in only one operand cannot divide the gcd.
    if let Some(v) = (0..nvars).find(|&v| da[v] > 0 && db[v] == 0) {
        return gcd_with_coefficients(b, a.to_univariate(v));
    }
    if let Some(v) = (0..nvars).find(|&v| db[v] > 0 && da[v] == 0) {
        return gcd_with_coefficients(a, b.to_univariate(v));
    }

    let v = (0..nvars)
        .filter(|&v| da[v] > 0)
        .min_by_key(|&v| da[v].max(db[v]))
        .expect("non-constant operands share a variable");

    let ua = a.to_univariate(v);
    let ub = b.to_univariate(v);
    let ca = content(&ua);
    let cb = content(&ub);
    let c = gcd(&ca, &cb);
    let mut p = primitive_part(&ua, &ca);
    let mut q = primitive_part(&ub, &cb);
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = pseudo_remainder(&p, &q);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            q = vec![Polynomial::one(nvars)];
            break;
        }
        let cr = content(&r);
        p = q;
        q = primitive_part(&r, &cr);
    }
    &c * &Polynomial::from_univariate(nvars, v, &q)
}

/// gcd of `g` with every coefficient in `coeffs`.
fn gcd_with_coefficients(g: &Polynomial, mut coeffs: Vec<Polynomial>) -> Polynomial {
    coeffs.retain(|c| !c.is_zero());
    coeffs.sort_by_key(Polynomial::num_terms);
    let mut acc = g.clone();
    for c in &coeffs {
        acc = gcd(&acc, c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// gcd of the coefficients of a univariate representation.
fn content(u: &[Polynomial]) -> Polynomial {
    let mut coeffs: Vec<&Polynomial> = u.iter().filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(|c| c.num_terms());
    let nvars = coeffs[0].nvars();
    let mut acc = coeffs[0].monic();
    for c in &coeffs[1..] {
        if acc.is_one() {
            break;
        }
        acc = gcd(&acc, c);
    }
    if acc.constant_value().is_some() {
        Polynomial::one(nvars)
    } else {
        acc
    }
}

fn primitive_part(u: &[Polynomial], content: &Polynomial) -> Vec<Polynomial> {
    if content.is_one() {
        return u.to_vec();
    }
    u.iter()
        .map(|c| c.exact_div(content).expect("content divides every coefficient"))
        .collect()
}

fn trim(u: &mut Vec<Polynomial>) {
    while u.last().is_some_and(Polynomial::is_zero) {
        u.pop();
    }
}

/// Pseudo-remainder of `p` by `q` (both univariate, `q` nonzero).
fn pseudo_remainder(p: &[Polynomial], q: &[Polynomial]) -> Vec<Polynomial> {
    let k = q.len() - 1;
    let lq = &q[k];
    let mut r = p.to_vec();
    trim(&mut r);
    while !r.is_empty() && r.len() > k {
        let shift = r.len() - 1 - k;
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c = &*c * lq;
        }
        for (j, qj) in q.iter().enumerate() {
            let t = qj * &lr;
            r[j + shift] = &r[j + shift] - &t;
        }
        trim(&mut r);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::polynomial::rat;

    fn var(n: usize, i: usize) -> Polynomial {
        Polynomial::variable(n, i)
    }

    #[test]
    fn shared_factor_is_recovered() {
        let (x, y, z) = (var(3, 0), var(3, 1), var(3, 2));
        let common = &(&x + &y) * &(&z - &Polynomial::constant(3, rat(2)));
        let a = &common * &(&x.pow(2) + &z);
        let b = &common * &(&y + &Polynomial::one(3));
        let g = gcd(&a, &b);
        assert_eq!(g, common.monic());
    }

    #[test]
    fn coprime_gives_one() {
        let (x, y) = (var(2, 0), var(2, 1));
        let a = &x.pow(2) + &y;
        let b = &y.pow(2) + &x;
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn powers_of_linear_form() {
        let vars: Vec<_> = (0..5).map(|i| var(5, i)).collect();
        let s = &(&vars[0] + &vars[1]) + &vars[2];
        let a = &s.pow(4) * &(&vars[3] * &vars[4]);
        let b = s.pow(7);
        assert_eq!(gcd(&a, &b), s.pow(4).monic());
    }

    #[test]
    fn monomial_operand() {
        let (x, y) = (var(2, 0), var(2, 1));
        let a = &x.pow(3) * &y;
        let b = &(&x.pow(2) * &y.pow(2)) + &x.pow(5);
        assert_eq!(gcd(&a, &b), x.pow(2));
    }
}
