use std::collections::BTreeMap;
use std::sync::Arc;

use super::blade::Blade;
use super::element::{contract, GradedElement, Variance};
use crate::error::{Error, Result};
use crate::symbolic::{Chart, RationalFunction};

/// A section `Δ` of `ΛⁿTM ⊗ T*M`, stored as `Δ_{I,j}` for `∂_I ⊗ dx_j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultivectorOneForm {
    chart: Arc<Chart>,
    degree: usize,
    terms: BTreeMap<(Blade, usize), RationalFunction>,
}

impl MultivectorOneForm {
    pub fn zero(chart: &Arc<Chart>, degree: usize) -> Self {
        MultivectorOneForm {
            chart: Arc::clone(chart),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        chart: &Arc<Chart>,
        degree: usize,
        terms: impl IntoIterator<Item = ((Blade, usize), RationalFunction)>,
    ) -> Result<Self> {
        let mut out = Self::zero(chart, degree);
        for ((b, j), c) in terms {
            if b.grade() != degree || j >= chart.dimension() || b.indices().any(|i| i >= chart.dimension()) {
                return Err(Error::InvalidArgument("malformed multivector-valued 1-form term".into()));
            }
            out.add_term(b, j, &c);
        }
        Ok(out)
    }

    /// `P ⊗ α` for a homogeneous multivector `P` and a 1-form `α`.
    pub fn tensor(p: &GradedElement, alpha: &GradedElement) -> Result<Self> {
        p.expect_variance(Variance::Multivector)?;
        alpha.expect_variance(Variance::Form)?;
        if p.chart() != alpha.chart() {
            return Err(Error::ChartMismatch);
        }
        let degree = p
            .homogeneous_degree()
            .ok_or_else(|| Error::DegreeMismatch("tensor factor must be homogeneous".into()))?;
        if !alpha.is_homogeneous_of(1) {
            return Err(Error::DegreeMismatch("second factor must be a 1-form".into()));
        }
        let mut out = Self::zero(p.chart(), degree);
        for (bp, cp) in p.terms() {
            for (ba, ca) in alpha.terms() {
                let j = ba.indices().next().expect("degree 1");
                out.add_term(*bp, j, &(cp * ca));
            }
        }
        Ok(out)
    }

    fn add_term(&mut self, b: Blade, j: usize, c: &RationalFunction) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&(b, j)) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&(b, j));
        } else {
            self.terms.insert((b, j), sum);
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    /// Multivector degree `n`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Blade, usize), &RationalFunction)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, b: Blade, j: usize) -> RationalFunction {
        self.terms.get(&(b, j)).cloned().unwrap_or_else(|| self.chart.zero())
    }

    /// `i_Δ ω = Σ Δ_{I,j} dx_j ∧ i_{∂_I} ω`.
    pub fn insert_into(&self, omega: &GradedElement) -> Result<GradedElement> {
        omega.expect_variance(Variance::Form)?;
        if omega.chart() != &self.chart {
            return Err(Error::ChartMismatch);
        }
        let mut out = GradedElement::zero(&self.chart, Variance::Form);
        let mut by_blade: BTreeMap<Blade, Vec<(usize, &RationalFunction)>> = BTreeMap::new();
        for ((b, j), c) in &self.terms {
            by_blade.entry(*b).or_default().push((*j, c));
        }
        for (b, entries) in by_blade {
            let unit = GradedElement::from_terms(&self.chart, Variance::Multivector, [(b, self.chart.one())]);
            let inner = contract(&unit, omega, Variance::Form);
            if inner.is_zero() {
                continue;
            }
            for (j, c) in entries {
                let dxj = GradedElement::coordinate_form(&self.chart, j).scale(c);
                out = &out + &dxj.wedge_unchecked(&inner);
            }
        }
        Ok(out)
    }
}

impl std::ops::Add for &MultivectorOneForm {
    type Output = MultivectorOneForm;
    fn add(self, rhs: &MultivectorOneForm) -> MultivectorOneForm {
        assert!(self.chart == rhs.chart && self.degree == rhs.degree, "incompatible summands");
        let mut out = self.clone();
        for ((b, j), c) in &rhs.terms {
            out.add_term(*b, *j, c);
        }
        out
    }
}
