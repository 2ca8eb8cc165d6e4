use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use super::blade::Blade;
use crate::error::{Error, Result};
use crate::symbolic::{Chart, Rational, RationalFunction};

/// Whether an element lives in `Ω(M)` or in `Γ(ΛTM)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Variance {
    Form,
    Multivector,
}

impl Variance {
    pub fn name(self) -> &'static str {
        match self {
            Variance::Form => "form",
            Variance::Multivector => "multivector",
        }
    }
}

/// A possibly inhomogeneous differential form or multivector field.
///
/// Coefficients are canonical rational functions indexed by blades; zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedElement {
    chart: Arc<Chart>,
    variance: Variance,
    terms: BTreeMap<Blade, RationalFunction>,
}

impl GradedElement {
    pub fn zero(chart: &Arc<Chart>, variance: Variance) -> Self {
        GradedElement {
            chart: Arc::clone(chart),
            variance,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(chart: &Arc<Chart>, variance: Variance, f: RationalFunction) -> Self {
        Self::from_terms(chart, variance, [(Blade::EMPTY, f)])
    }

    pub fn one(chart: &Arc<Chart>, variance: Variance) -> Self {
        Self::scalar(chart, variance, chart.one())
    }

    /// A zero-degree form holding `f`.
    pub fn function(chart: &Arc<Chart>, f: RationalFunction) -> Self {
        Self::scalar(chart, Variance::Form, f)
    }

    pub fn from_terms(
        chart: &Arc<Chart>,
        variance: Variance,
        terms: impl IntoIterator<Item = (Blade, RationalFunction)>,
    ) -> Self {
        let mut out = Self::zero(chart, variance);
        for (b, c) in terms {
            assert!(
                b.indices().all(|i| i < chart.dimension()),
                "blade index outside the chart"
            );
            out.add_term(b, &c);
        }
        out
    }

    /// The basis element for an arbitrary index sequence, with the sign of its sorting permutation.
    pub fn basis(chart: &Arc<Chart>, variance: Variance, indices: &[usize]) -> Result<Self> {
        if let Some(&i) = indices.iter().find(|&&i| i >= chart.dimension()) {
            return Err(Error::InvalidArgument(format!("index {i} outside the chart")));
        }
        Ok(match Blade::from_sequence(indices) {
            None => Self::zero(chart, variance),
            Some((sign, b)) => {
                let c = chart.constant(Rational::from_integer(sign.into()));
                Self::from_terms(chart, variance, [(b, c)])
            }
        })
    }

    /// `dx_i`.
    pub fn coordinate_form(chart: &Arc<Chart>, i: usize) -> Self {
        Self::from_terms(chart, Variance::Form, [(Blade::single(i), chart.one())])
    }

    /// `∂/∂x_i`.
    pub fn coordinate_vector(chart: &Arc<Chart>, i: usize) -> Self {
        Self::from_terms(chart, Variance::Multivector, [(Blade::single(i), chart.one())])
    }

    /// `df` for a function `f`.
    pub fn differential(chart: &Arc<Chart>, f: &RationalFunction) -> Self {
        let terms = (0..chart.dimension()).map(|i| (Blade::single(i), f.derivative(i)));
        Self::from_terms(chart, Variance::Form, terms)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn dimension(&self) -> usize {
        self.chart.dimension()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, blade: Blade) -> RationalFunction {
        self.terms
            .get(&blade)
            .cloned()
            .unwrap_or_else(|| self.chart.zero())
    }

    /// The degree-0 part.
    pub fn scalar_part(&self) -> RationalFunction {
        self.coefficient(Blade::EMPTY)
    }

    /// Degrees carrying a nonzero term, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.terms.keys().map(|b| b.grade()).collect();
        out.dedup();
        out
    }

    /// The common degree of all terms; `None` for zero or inhomogeneous elements.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let degrees = self.degrees();
        (degrees.len() == 1).then(|| degrees[0])
    }

    /// True when zero or homogeneous of degree `k`.
    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.terms.keys().all(|b| b.grade() == k)
    }

    /// The degree-`k` component.
    pub fn component(&self, k: usize) -> Self {
        self.filter_degrees(|d| d == k)
    }

    pub(crate) fn filter_degrees(&self, keep: impl Fn(usize) -> bool) -> Self {
        GradedElement {
            chart: Arc::clone(&self.chart),
            variance: self.variance,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| keep(b.grade()))
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    pub(crate) fn add_term(&mut self, blade: Blade, c: &RationalFunction) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(blade) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub(crate) fn add_signed_term(&mut self, blade: Blade, sign: i8, c: &RationalFunction) {
        if sign < 0 {
            self.add_term(blade, &-c);
        } else {
            self.add_term(blade, c);
        }
    }

    pub fn scale(&self, f: &RationalFunction) -> Self {
        if f.is_zero() {
            return Self::zero(&self.chart, self.variance);
        }
        if f.is_one() {
            return self.clone();
        }
        let mut out = Self::zero(&self.chart, self.variance);
        for (b, c) in &self.terms {
            out.add_term(*b, &(c * f));
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.scale(&self.chart.constant(c.clone()))
    }

    /// Checks chart and variance agreement.
    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch);
        }
        if self.variance != other.variance {
            return Err(Error::VarianceMismatch {
                expected: self.variance.name(),
                found: other.variance.name(),
            });
        }
        Ok(())
    }

    pub(crate) fn expect_variance(&self, variance: Variance) -> Result<()> {
        if self.variance != variance {
            return Err(Error::VarianceMismatch {
                expected: variance.name(),
                found: self.variance.name(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self + other)
    }

    /// `self ∧ other`.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.wedge_unchecked(other))
    }

    pub(crate) fn wedge_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.chart, self.variance);
        for (ba, ca) in &self.terms {
            for (bb, cb) in &other.terms {
                if let Some((sign, b)) = ba.merge(*bb) {
                    out.add_signed_term(b, sign, &(ca * cb));
                }
            }
        }
        out
    }

    /// Exterior derivative of a form.
    pub fn exterior_derivative(&self) -> Result<Self> {
        self.expect_variance(Variance::Form)?;
        Ok(self.d())
    }

    pub(crate) fn d(&self) -> Self {
        let mut out = Self::zero(&self.chart, Variance::Form);
        for (b, c) in &self.terms {
            for i in 0..self.dimension() {
                if b.contains(i) {
                    continue;
                }
                let dc = c.derivative(i);
                if dc.is_zero() {
                    continue;
                }
                let (sign, nb) = Blade::single(i).merge(*b).expect("disjoint");
                out.add_signed_term(nb, sign, &dc);
            }
        }
        out
    }

    /// Contracts the first slot of the multivector `self` with the 1-form `alpha`.
    pub fn insert_covector(&self, alpha: &Self) -> Result<Self> {
        self.expect_variance(Variance::Multivector)?;
        alpha.expect_variance(Variance::Form)?;
        if self.chart != alpha.chart {
            return Err(Error::ChartMismatch);
        }
        if !alpha.is_homogeneous_of(1) {
            return Err(Error::DegreeMismatch("covector insertion needs a 1-form".into()));
        }
        Ok(contract(alpha, self, Variance::Multivector))
    }

    /// `i_P ω` for the multivector `self = P`; contracts the leading slots of `ω` in order,
    /// so that `i_P ω = pair(P, ω)` when the degrees agree.
    pub fn insert_into(&self, omega: &Self) -> Result<Self> {
        self.expect_variance(Variance::Multivector)?;
        omega.expect_variance(Variance::Form)?;
        if self.chart != omega.chart {
            return Err(Error::ChartMismatch);
        }
        Ok(contract(self, omega, Variance::Form))
    }

    /// Full pairing `⟨P, ω⟩` with `⟨∂_I, dx_J⟩ = δ_{I,J}`; both must share one homogeneous degree.
    pub fn pair(&self, omega: &Self) -> Result<RationalFunction> {
        self.expect_variance(Variance::Multivector)?;
        omega.expect_variance(Variance::Form)?;
        if self.chart != omega.chart {
            return Err(Error::ChartMismatch);
        }
        let (dp, dw) = (self.homogeneous_degree(), omega.homogeneous_degree());
        if dp.is_some() && dw.is_some() && dp != dw || dp.is_none() && !self.is_zero() || dw.is_none() && !omega.is_zero() {
            return Err(Error::DegreeMismatch(format!(
                "pairing degrees {:?} and {:?}",
                self.degrees(),
                omega.degrees()
            )));
        }
        let mut acc = self.chart.zero();
        for (b, c) in &self.terms {
            if let Some(w) = omega.terms.get(b) {
                acc = &acc + &(c * w);
            }
        }
        Ok(acc)
    }

    /// `P(α_1, ..., α_k)` for 1-forms `α_i`, by successive first-slot contraction.
    pub fn evaluate_on(&self, covectors: &[Self]) -> Result<RationalFunction> {
        self.expect_variance(Variance::Multivector)?;
        let mut acc = self.component(covectors.len());
        for alpha in covectors {
            acc = acc.insert_covector(alpha)?;
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc.scalar_part())
    }

    /// Sum of `f(coefficient)` over the terms, keeping blades.
    pub fn map_coefficients(&self, f: impl Fn(&RationalFunction) -> RationalFunction) -> Self {
        let mut out = Self::zero(&self.chart, self.variance);
        for (b, c) in &self.terms {
            out.add_term(*b, &f(c));
        }
        out
    }
}

/// Contraction of `inner` into the leading slots of `outer`, blade by blade.
pub(crate) fn contract(inner: &GradedElement, outer: &GradedElement, out_variance: Variance) -> GradedElement {
    let mut out = GradedElement::zero(&outer.chart, out_variance);
    for (bi, ci) in &inner.terms {
        for (bo, co) in &outer.terms {
            if let Some((sign, rest)) = Blade::split_off(*bi, *bo) {
                out.add_signed_term(rest, sign, &(ci * co));
            }
        }
    }
    out
}

impl Add for &GradedElement {
    type Output = GradedElement;
    fn add(self, rhs: &GradedElement) -> GradedElement {
        assert!(
            self.variance == rhs.variance && self.chart == rhs.chart,
            "adding incompatible graded elements"
        );
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (b, c) in &small.terms {
            big.add_term(*b, c);
        }
        big
    }
}

impl Neg for &GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        GradedElement {
            chart: Arc::clone(&self.chart),
            variance: self.variance,
            terms: self.terms.iter().map(|(b, c)| (*b, -c)).collect(),
        }
    }
}

impl Sub for &GradedElement {
    type Output = GradedElement;
    fn sub(self, rhs: &GradedElement) -> GradedElement {
        self + &(-rhs)
    }
}

impl Add for GradedElement {
    type Output = GradedElement;
    fn add(self, rhs: GradedElement) -> GradedElement {
        &self + &rhs
    }
}

impl Sub for GradedElement {
    type Output = GradedElement;
    fn sub(self, rhs: GradedElement) -> GradedElement {
        &self - &rhs
    }
}

impl Neg for GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        -&self
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::format_element(self))
    }
}
