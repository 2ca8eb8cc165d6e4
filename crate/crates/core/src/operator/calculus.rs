//! Koszul brackets generated by an operator and the identities they satisfy.

use crate::error::{Error, Result};
use crate::exterior::{GradedElement, Variance};
use crate::symbolic::RationalFunction;

use super::tree::GradedOperator;

pub(crate) fn degree_of(a: &GradedElement) -> Result<i32> {
    if a.is_zero() {
        return Ok(0);
    }
    a.homogeneous_degree()
        .map(|k| k as i32)
        .ok_or_else(|| Error::DegreeMismatch("bracket arguments must be homogeneous".into()))
}

fn sign(e: i32) -> bool {
    e.rem_euclid(2) == 1
}

/// `[[...[D, μ_{a_1}], ...], μ_{a_k}]` as an operator.
pub fn nested_commutator(d: &GradedOperator, args: &[GradedElement]) -> Result<GradedOperator> {
    let mut acc = d.clone();
    for a in args {
        let m = multiplication(d, a)?;
        acc = GradedOperator::commutator(&acc, &m)?;
    }
    Ok(acc)
}

/// `μ_a`, keeping the zero form in its nominal place.
fn multiplication(d: &GradedOperator, a: &GradedElement) -> Result<GradedOperator> {
    if a.chart() != d.chart() {
        return Err(Error::ChartMismatch);
    }
    if a.is_zero() {
        return Ok(GradedOperator::zero(d.chart(), 0));
    }
    GradedOperator::mul(a)
}

/// `Φ_D^k(a_1, ..., a_k) = [[...[D, a_1], ...], a_k](1)`.
pub fn phi(d: &GradedOperator, args: &[GradedElement]) -> Result<GradedElement> {
    if args.is_empty() {
        return Err(Error::InvalidArgument("Φ needs at least one argument".into()));
    }
    for a in args {
        a.expect_variance(Variance::Form)?;
    }
    let op = nested_commutator(d, args)?;
    op.apply(&GradedElement::one(d.chart(), Variance::Form))
}

/// `[[a_1, ..., a_n]]_D` for 1-forms `a_1..a_{n−1}` and a last argument of any degree.
pub fn filippov_bracket(d: &GradedOperator, args: &[GradedElement]) -> Result<GradedElement> {
    let n = args.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty bracket".into()));
    }
    if d.degree() != -(n as i32 - 1) {
        return Err(Error::DegreeMismatch(format!(
            "an {n}-bracket needs an operator of degree {}, found {}",
            1 - n as i32,
            d.degree()
        )));
    }
    for a in &args[..n - 1] {
        a.expect_variance(Variance::Form)?;
        if !a.is_homogeneous_of(1) {
            return Err(Error::DegreeMismatch("leading bracket arguments must be 1-forms".into()));
        }
    }
    phi(d, args)
}

/// `{f_1, ..., f_n}_D = Φ_D^n(df_1, ..., df_{n−1}, f_n)`.
pub fn function_bracket(d: &GradedOperator, fs: &[RationalFunction]) -> Result<RationalFunction> {
    let n = fs.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty bracket".into()));
    }
    let chart = d.chart();
    let mut args: Vec<GradedElement> = fs[..n - 1]
        .iter()
        .map(|f| GradedElement::differential(chart, f))
        .collect();
    args.push(GradedElement::function(chart, fs[n - 1].clone()));
    let out = filippov_bracket(d, &args)?;
    if !out.is_homogeneous_of(0) {
        return Err(Error::DegreeMismatch("function bracket is not a function".into()));
    }
    Ok(out.scalar_part())
}

/// Failure of skew-symmetry in the last two slots together with the predicted defect.
///
/// Returns `({.., f_{n−1}, f_n}_D + {.., f_n, f_{n−1}}_D, (−1)^n Φ_{[D,d]}(df_1, ..., df_{n−2}, f_{n−1}, f_n))`;
/// the two agree for every operator of order at most `n`. The sign comes from moving `d` past the
/// `n − 2` leading multiplications by 1-forms.
pub fn last_pair_skew_defect(
    d: &GradedOperator,
    fs: &[RationalFunction],
) -> Result<(RationalFunction, RationalFunction)> {
    let n = fs.len();
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two functions".into()));
    }
    let mut swapped = fs.to_vec();
    swapped.swap(n - 2, n - 1);
    let sum = &function_bracket(d, fs)? + &function_bracket(d, &swapped)?;
    let chart = d.chart();
    let dd = GradedOperator::commutator(d, &GradedOperator::d(chart))?;
    let mut args: Vec<GradedElement> = fs[..n - 2]
        .iter()
        .map(|f| GradedElement::differential(chart, f))
        .collect();
    args.push(GradedElement::function(chart, fs[n - 2].clone()));
    args.push(GradedElement::function(chart, fs[n - 1].clone()));
    let predicted = phi(&dd, &args)?;
    if !predicted.is_homogeneous_of(0) {
        return Err(Error::DegreeMismatch("skew defect is not a function".into()));
    }
    let predicted = predicted.scalar_part();
    Ok((sum, if n.is_multiple_of(2) { predicted } else { -predicted }))
}

/// The three parts of the graded Fundamental Identity expansion.
#[derive(Clone, Debug)]
pub struct FiExpansion {
    /// `Φ(a_1, ..., a_{n−1}, Φ(b_1, ..., b_n))`
    pub lhs: GradedElement,
    /// signed sum of `Φ(b_1, ..., Φ(a_1, ..., a_{n−1}, b_j), ..., b_n)`
    pub derivation_terms: GradedElement,
    /// `[[...[[...[D, a_1], ...], a_{n−1}], D], b_1], ..., b_n](1)`
    pub residual_term: GradedElement,
}

impl FiExpansion {
    /// `lhs − derivation_terms − residual_term`.
    pub fn defect(&self) -> GradedElement {
        &(&self.lhs - &self.derivation_terms) - &self.residual_term
    }
}

/// Computes every piece of the graded Fundamental Identity for `D`.
pub fn fi_expansion(d: &GradedOperator, a: &[GradedElement], b: &[GradedElement]) -> Result<FiExpansion> {
    let n = b.len();
    if n == 0 || a.len() + 1 != n {
        return Err(Error::InvalidArgument(format!(
            "expected n−1 = {} first arguments and n = {n} second arguments",
            a.len()
        )));
    }
    let dd = d.degree();
    let sum_a: i32 = a.iter().map(degree_of).sum::<Result<i32>>()?;
    let b_degrees: Vec<i32> = b.iter().map(degree_of).collect::<Result<_>>()?;

    let inner = phi(d, b)?;
    let mut lhs_args = a.to_vec();
    lhs_args.push(inner);
    let lhs = phi(d, &lhs_args)?;

    let mut derivation_terms = GradedElement::zero(d.chart(), Variance::Form);
    let mut prefix = 0;
    for j in 0..n {
        let mut inner_args = a.to_vec();
        inner_args.push(b[j].clone());
        let inner = phi(d, &inner_args)?;
        let mut args = b.to_vec();
        args[j] = inner;
        let term = phi(d, &args)?;
        if sign((dd + sum_a) * (dd + prefix)) {
            derivation_terms = &derivation_terms - &term;
        } else {
            derivation_terms = &derivation_terms + &term;
        }
        prefix += b_degrees[j];
    }

    let head = nested_commutator(d, a)?;
    let with_d = GradedOperator::commutator(&head, d)?;
    let residual_term = nested_commutator(&with_d, b)?.apply(&GradedElement::one(d.chart(), Variance::Form))?;

    Ok(FiExpansion {
        lhs,
        derivation_terms,
        residual_term,
    })
}

/// `LHS − Σ RHS − residual` of the graded Fundamental Identity; zero for operators of order at most `n`.
pub fn fi_residual(d: &GradedOperator, a: &[GradedElement], b: &[GradedElement]) -> Result<GradedElement> {
    Ok(fi_expansion(d, a, b)?.defect())
}

/// `(−1)^a Φ_D^2(a, b)` minus its expansion
/// `(−1)^a D(ab) − (−1)^a D(a) b − (−1)^{a(D+1)} a D(b)`.
pub fn koszul_binary_expansion_check(
    d: &GradedOperator,
    a: &GradedElement,
    b: &GradedElement,
) -> Result<GradedElement> {
    if d.degree() != -1 {
        return Err(Error::DegreeMismatch(format!(
            "binary Koszul bracket needs degree −1, found {}",
            d.degree()
        )));
    }
    let da = degree_of(a)?;
    degree_of(b)?;
    let bracket = phi(d, &[a.clone(), b.clone()])?;
    let ab = a.wedge(b)?;
    let expansion = &(&d.apply(&ab)? - &d.apply(a)?.wedge(b)?) - &{
        let t = a.wedge(&d.apply(b)?)?;
        // (−1)^{a(D+1)} relative to the common factor (−1)^a
        if sign(da * (d.degree() + 1) - da) {
            -t
        } else {
            t
        }
    };
    let lhs = if sign(da) { -bracket } else { bracket };
    let expansion = if sign(da) { -expansion } else { expansion };
    Ok(&lhs - &expansion)
}
