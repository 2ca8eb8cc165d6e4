use std::cell::RefCell;
use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::gcd::gcd;
use super::polynomial::{Polynomial, Rational};
use crate::error::{Error, Result};

/// A rational function in canonical form.
///
/// Invariants: the denominator is nonzero, numerator and denominator are
/// coprime, the denominator's grlex-leading coefficient is `1`, and zero is
/// stored as `0/1`. Structural equality is therefore mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn zero(nvars: usize) -> Self {
        RationalFunction {
            num: Polynomial::zero(nvars),
            den: Polynomial::one(nvars),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        RationalFunction {
            num: Polynomial::constant(nvars, c),
            den: Polynomial::one(nvars),
        }
    }

    pub fn variable(nvars: usize, var: usize) -> Self {
        Self::from_polynomial(Polynomial::variable(nvars, var))
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        let nvars = p.nvars();
        RationalFunction {
            num: p,
            den: Polynomial::one(nvars),
        }
    }

    /// Brings `num / den` to canonical form.
    pub fn normalize(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.nvars()));
        }
        let g = gcd(&num, &den);
        if g.is_one() {
            return Ok(Self::fix_sign(num, den));
        }
        let num = num.exact_div(&g).expect("gcd divides numerator");
        let den = den.exact_div(&g).expect("gcd divides denominator");
        Ok(Self::fix_sign(num, den))
    }

    /// Scales a coprime pair so the denominator is monic.
    fn fix_sign(num: Polynomial, den: Polynomial) -> Self {
        let lc = den.leading_coefficient().expect("nonzero denominator").clone();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.recip();
            RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value of a constant function (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        if !self.den.is_one() {
            return None;
        }
        if self.num.is_zero() {
            return Some(Rational::zero());
        }
        self.num.constant_value().cloned()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::fix_sign(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// Partial derivative with respect to variable index `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let dn = self.num.derivative(var);
        if self.den.constant_value().is_some() {
            return RationalFunction {
                num: dn,
                den: self.den.clone(),
            };
        }
        let dd = self.den.derivative(var);
        if dd.is_zero() {
            return Self::normalize(dn, self.den.clone()).expect("nonzero denominator");
        }
        // With g = gcd(d, d'), e = d/g, e' = d'/g: (n/d)' = (n'e - ne') / (de).
        // Primes of d that involve `var` divide e once and not e', so they cannot
        // cancel. Primes free of `var` sit wholly in g; only those can.
        let (g, e, de) = split_denominator(&self.den, &dd, var);
        let mut top = &(&dn * &e) - &(&self.num * &de);
        if top.is_zero() {
            return Self::zero(self.nvars());
        }
        let mut den = &self.den * &e;
        if !g.is_constant() {
            let h = gcd(&top, &g);
            if !h.is_constant() {
                top = top.exact_div(&h).expect("gcd divides");
                den = den.exact_div(&h).expect("gcd divides");
            }
        }
        Self::fix_sign(top, den)
    }

    /// Exact value at a point given for every variable.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::EvaluationAtPole);
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.num.eval_f64(point) / self.den.eval_f64(point)
    }

    /// True when the leading numerator coefficient is negative; used by printers.
    pub fn is_negative_leading(&self) -> bool {
        self.num.leading_coefficient().is_some_and(|c| c.is_negative())
    }
}

thread_local! {
    static SPLIT_CACHE: RefCell<HashMap<(Polynomial, usize), Split>> = RefCell::new(HashMap::new());
}

type Split = (Polynomial, Polynomial, Polynomial);

/// `(g, d / g, d' / g)` with `g = gcd(d, d')`, memoized per thread.
fn split_denominator(d: &Polynomial, dd: &Polynomial, var: usize) -> Split {
    let key = (d.clone(), var);
    if let Some(hit) = SPLIT_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let g = gcd(d, dd);
    let out = (
        g.clone(),
        d.exact_div(&g).expect("gcd divides"),
        dd.exact_div(&g).expect("gcd divides"),
    );
    SPLIT_CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() > 4096 {
            c.clear();
        }
        c.insert(key, out.clone());
    });
    out
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RationalFunction::from_polynomial(num);
            }
            return RationalFunction::normalize(num, self.den.clone()).expect("nonzero");
        }
        let g = gcd(&self.den, &rhs.den);
        if g.is_one() {
            // coprime denominators: the cross sum is already reduced
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            let den = &self.den * &rhs.den;
            if num.is_zero() {
                return RationalFunction::zero(self.nvars());
            }
            return RationalFunction::fix_sign(num, den);
        }
        let a = self.den.exact_div(&g).expect("gcd divides");
        let b = rhs.den.exact_div(&g).expect("gcd divides");
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        let den = &(&a * &b) * &g;
        RationalFunction::normalize(num, den).expect("nonzero")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero(self.nvars());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_polynomial(&self.num * &rhs.num);
        }
        // cross-cancel: (a/b)(c/d) with g1 = gcd(a, d), g2 = gcd(c, b)
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let a = self.num.exact_div(&g1).expect("gcd divides");
        let d = rhs.den.exact_div(&g1).expect("gcd divides");
        let c = rhs.num.exact_div(&g2).expect("gcd divides");
        let b = self.den.exact_div(&g2).expect("gcd divides");
        RationalFunction::fix_sign(&a * &c, &b * &d)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $f(self, rhs: RationalFunction) -> RationalFunction { (&self).$f(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}
