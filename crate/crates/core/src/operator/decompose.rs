//! Recovering multivectors from operators.

use crate::error::{Error, Result};
use crate::exterior::{Blade, GradedElement, MultivectorOneForm, Variance};

use super::tree::GradedOperator;
use super::verify::{is_tensorial, symb_top_vanishes, TestStrategy};

/// `D = i_A + i_Δ` for a tensorial operator of degree `1 − n`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub a: GradedElement,
    pub delta: MultivectorOneForm,
}

impl Decomposition {
    pub fn operator(&self) -> Result<GradedOperator> {
        let ia = GradedOperator::insert_with_degree(&self.a, self.delta.degree() - 1)?;
        GradedOperator::sum(&[ia, GradedOperator::insert_mixed(&self.delta)])
    }
}

fn unit_form(d: &GradedOperator, b: Blade) -> GradedElement {
    GradedElement::from_terms(d.chart(), Variance::Form, [(b, d.chart().one())])
}

fn check_degree(d: &GradedOperator, n: usize) -> Result<()> {
    if n == 0 || d.degree() != 1 - n as i32 {
        return Err(Error::DegreeMismatch(format!(
            "expected an operator of degree {}, found {}",
            1 - n as i32,
            d.degree()
        )));
    }
    Ok(())
}

/// The `n`-multivector `N` with `N(dx_{i_1}, ..., dx_{i_n}) = [D, μ_{x_{i_1}}](dx_{i_2}∧...∧dx_{i_n})`.
///
/// Fails unless `[D, d]` passes the symbol test and the values are fully alternating.
pub fn extract_top_multivector(d: &GradedOperator, n: usize, strategy: &TestStrategy) -> Result<GradedElement> {
    check_degree(d, n)?;
    let chart = d.chart();
    let dim = chart.dimension();
    let verdict = symb_top_vanishes(d, n, strategy)?;
    if !verdict.passed() {
        let w = verdict.witness.as_ref().map(|w| w.describe()).unwrap_or_default();
        return Err(Error::TopSymbolNotMultivector(format!("[D, d] has order above {}: {w}", n - 1)));
    }
    let mut n_coeffs = GradedElement::zero(chart, Variance::Multivector);
    let mut q_values = Vec::new();
    for j in 0..dim {
        let x = GradedOperator::mul_function(chart, &chart.coordinate(j));
        let cj = GradedOperator::commutator(d, &x)?;
        for rest in Blade::all_of_grade(dim, n - 1) {
            let value = cj.apply(&unit_form(d, rest))?;
            if !value.is_homogeneous_of(0) {
                return Err(Error::TopSymbolNotMultivector(format!(
                    "[D, x_{j}] does not map (n−1)-forms to functions"
                )));
            }
            let v = value.scalar_part();
            if let Some((sign, full)) = Blade::single(j).merge(rest) {
                if j == full.indices().next().expect("nonempty") {
                    let v = if sign < 0 { -&v } else { v.clone() };
                    n_coeffs = &n_coeffs + &GradedElement::from_terms(chart, Variance::Multivector, [(full, v)]);
                }
            }
            q_values.push((j, rest, v));
        }
    }
    for (j, rest, v) in q_values {
        let expected = match Blade::single(j).merge(rest) {
            None => chart.zero(),
            Some((sign, full)) => {
                let c = n_coeffs.coefficient(full);
                if sign < 0 {
                    -c
                } else {
                    c
                }
            }
        };
        if v != expected {
            return Err(Error::TopSymbolNotMultivector(format!(
                "value on (x_{j}, {:?}) breaks skew-symmetry",
                rest.indices().collect::<Vec<_>>()
            )));
        }
    }
    Ok(n_coeffs)
}

/// Splits a tensorial operator of degree `1 − n` as `i_A + i_Δ` and checks the reconstruction on every basis form.
pub fn decompose_tensorial(d: &GradedOperator, n: usize, strategy: &TestStrategy) -> Result<Decomposition> {
    check_degree(d, n)?;
    let chart = d.chart();
    let dim = chart.dimension();
    let verdict = is_tensorial(d, strategy)?;
    if !verdict.passed() {
        let w = verdict.witness.as_ref().map(|w| w.describe()).unwrap_or_default();
        return Err(Error::NotTensorial(w));
    }
    let mut a = GradedElement::zero(chart, Variance::Multivector);
    for b in Blade::all_of_grade(dim, n - 1) {
        let v = d.apply(&unit_form(d, b))?;
        if !v.is_homogeneous_of(0) {
            return Err(Error::ReconstructionMismatch("image of an (n−1)-form is not a function".into()));
        }
        a = &a + &GradedElement::from_terms(chart, Variance::Multivector, [(b, v.scalar_part())]);
    }
    let ia = GradedOperator::insert_with_degree(&a, n - 1)?;
    let rest = d.sub(&ia)?;
    let mut terms = Vec::new();
    for b in Blade::all_of_grade(dim, n) {
        let v = rest.apply(&unit_form(d, b))?;
        if !v.is_homogeneous_of(1) {
            return Err(Error::ReconstructionMismatch("image of an n-form is not a 1-form".into()));
        }
        for (bj, c) in v.terms() {
            let j = bj.indices().next().expect("degree 1");
            terms.push(((b, j), c.clone()));
        }
    }
    let delta = MultivectorOneForm::from_terms(chart, n, terms)?;
    let out = Decomposition { a, delta };
    let rebuilt = out.operator()?;
    for b in Blade::all(dim) {
        let w = unit_form(d, b);
        if d.apply(&w)? != rebuilt.apply(&w)? {
            return Err(Error::ReconstructionMismatch(format!(
                "operator differs from i_A + i_Δ on dx_{:?}",
                b.indices().collect::<Vec<_>>()
            )));
        }
    }
    Ok(out)
}
