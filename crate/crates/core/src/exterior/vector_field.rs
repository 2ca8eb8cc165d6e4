use std::sync::Arc;

use super::blade::Blade;
use super::element::{GradedElement, Variance};
use crate::error::{Error, Result};
use crate::symbolic::{Chart, RationalFunction};

/// A vector field: a multivector homogeneous of degree 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField(GradedElement);

impl VectorField {
    pub fn new(element: GradedElement) -> Result<Self> {
        element.expect_variance(Variance::Multivector)?;
        if !element.is_homogeneous_of(1) {
            return Err(Error::DegreeMismatch("a vector field has degree 1".into()));
        }
        Ok(VectorField(element))
    }

    pub fn zero(chart: &Arc<Chart>) -> Self {
        VectorField(GradedElement::zero(chart, Variance::Multivector))
    }

    pub fn from_components(chart: &Arc<Chart>, components: Vec<RationalFunction>) -> Self {
        assert_eq!(components.len(), chart.dimension());
        let terms = components.into_iter().enumerate().map(|(i, c)| (Blade::single(i), c));
        VectorField(GradedElement::from_terms(chart, Variance::Multivector, terms))
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.0.chart()
    }

    pub fn as_element(&self) -> &GradedElement {
        &self.0
    }

    pub fn into_element(self) -> GradedElement {
        self.0
    }

    /// `X^i`.
    pub fn component(&self, i: usize) -> RationalFunction {
        self.0.coefficient(Blade::single(i))
    }

    pub fn components(&self) -> Vec<RationalFunction> {
        (0..self.0.dimension()).map(|i| self.component(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `X(f) = Σ X^i ∂f/∂x_i`.
    pub fn apply(&self, f: &RationalFunction) -> RationalFunction {
        let mut acc = self.0.chart().zero();
        for (b, c) in self.0.terms() {
            let i = b.indices().next().expect("degree 1");
            let df = f.derivative(i);
            if !df.is_zero() {
                acc = &acc + &(c * &df);
            }
        }
        acc
    }

    /// `[X, Y]` with `[X, Y](f) = X(Y f) − Y(X f)`.
    pub fn lie_bracket(&self, other: &VectorField) -> Result<VectorField> {
        self.0.check_compatible(&other.0)?;
        let comps = (0..self.0.dimension())
            .map(|i| &self.apply(&other.component(i)) - &other.apply(&self.component(i)))
            .collect();
        Ok(Self::from_components(self.chart(), comps))
    }

    /// `L_X P` through the expansion
    /// `(L_X P)(g_1, ..., g_n) = X(P(g_1, ..., g_n)) − Σ_i P(g_1, ..., X g_i, ..., g_n)`
    /// evaluated on coordinate functions.
    pub fn lie_derivative(&self, p: &GradedElement) -> Result<GradedElement> {
        p.expect_variance(Variance::Multivector)?;
        if self.chart() != p.chart() {
            return Err(Error::ChartMismatch);
        }
        let chart = self.chart();
        let mut out = GradedElement::zero(chart, Variance::Multivector);
        for k in p.degrees() {
            let pk = p.component(k);
            let dxs: Vec<GradedElement> =
                (0..chart.dimension()).map(|i| GradedElement::coordinate_form(chart, i)).collect();
            let dxi: Vec<GradedElement> = (0..chart.dimension())
                .map(|i| GradedElement::differential(chart, &self.component(i)))
                .collect();
            for blade in Blade::all_of_grade(chart.dimension(), k) {
                let idx: Vec<usize> = blade.indices().collect();
                let mut coeff = self.apply(&pk.coefficient(blade));
                for s in 0..k {
                    let args: Vec<GradedElement> = idx
                        .iter()
                        .enumerate()
                        .map(|(t, &i)| if t == s { dxi[i].clone() } else { dxs[i].clone() })
                        .collect();
                    coeff = &coeff - &pk.evaluate_on(&args)?;
                }
                out.add_term(blade, &coeff);
            }
        }
        Ok(out)
    }
}

impl From<VectorField> for GradedElement {
    fn from(x: VectorField) -> Self {
        x.0
    }
}
