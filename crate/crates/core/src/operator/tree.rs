use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exterior::{GradedElement, MultivectorOneForm, Variance};
use crate::symbolic::{Chart, Rational, RationalFunction};

/// Node kinds of an operator expression.
#[derive(Debug)]
pub enum OpKind {
    /// `d`
    ExtDiff,
    /// `i_P`
    Insert(GradedElement),
    /// `i_Δ` for `Δ ∈ Γ(ΛⁿTM ⊗ T*M)`
    InsertMixed(MultivectorOneForm),
    /// `μ_a`
    MulForm(GradedElement),
    /// `L_P = [i_P, d]`
    LieDer(GradedElement),
    Commutator(GradedOperator, GradedOperator),
    Compose(GradedOperator, GradedOperator),
    Sum(Vec<GradedOperator>),
    Scale(Rational, GradedOperator),
    Zero,
}

#[derive(Debug)]
struct Node {
    chart: Arc<Chart>,
    degree: i32,
    kind: OpKind,
}

/// A homogeneous operator on `Ω(M)`, evaluated by structural recursion.
///
/// Cloning is cheap; subtrees are shared.
#[derive(Clone, Debug)]
pub struct GradedOperator(Arc<Node>);

fn homogeneous_degree(e: &GradedElement, what: &str) -> Result<usize> {
    if e.is_zero() {
        return Ok(0);
    }
    e.homogeneous_degree()
        .ok_or_else(|| Error::DegreeMismatch(format!("{what} must be homogeneous")))
}

impl GradedOperator {
    fn node(chart: &Arc<Chart>, degree: i32, kind: OpKind) -> Self {
        GradedOperator(Arc::new(Node {
            chart: Arc::clone(chart),
            degree,
            kind,
        }))
    }

    pub fn zero(chart: &Arc<Chart>, degree: i32) -> Self {
        Self::node(chart, degree, OpKind::Zero)
    }

    /// The exterior derivative.
    pub fn d(chart: &Arc<Chart>) -> Self {
        Self::node(chart, 1, OpKind::ExtDiff)
    }

    /// `i_P` for a homogeneous multivector.
    pub fn insert(p: &GradedElement) -> Result<Self> {
        let deg = homogeneous_degree(p, "inserted multivector")?;
        Self::insert_with_degree(p, deg)
    }

    /// `i_P` with the degree of `P` stated, so that `P = 0` keeps its nominal degree.
    pub fn insert_with_degree(p: &GradedElement, deg: usize) -> Result<Self> {
        p.expect_variance(Variance::Multivector)?;
        if !p.is_homogeneous_of(deg) {
            return Err(Error::DegreeMismatch(format!("multivector is not of degree {deg}")));
        }
        Ok(Self::node(p.chart(), -(deg as i32), OpKind::Insert(p.clone())))
    }

    /// `i_Δ`, of degree `1 − n`.
    pub fn insert_mixed(delta: &MultivectorOneForm) -> Self {
        Self::node(
            delta.chart(),
            1 - delta.degree() as i32,
            OpKind::InsertMixed(delta.clone()),
        )
    }

    /// `μ_a` for a homogeneous form.
    pub fn mul(a: &GradedElement) -> Result<Self> {
        a.expect_variance(Variance::Form)?;
        let deg = homogeneous_degree(a, "multiplier")?;
        Ok(Self::node(a.chart(), deg as i32, OpKind::MulForm(a.clone())))
    }

    /// `μ_f` for a function.
    pub fn mul_function(chart: &Arc<Chart>, f: &RationalFunction) -> Self {
        Self::node(chart, 0, OpKind::MulForm(GradedElement::function(chart, f.clone())))
    }

    /// `L_P = [i_P, d]`.
    pub fn lie(p: &GradedElement) -> Result<Self> {
        let deg = homogeneous_degree(p, "multivector")?;
        Self::lie_with_degree(p, deg)
    }

    pub fn lie_with_degree(p: &GradedElement, deg: usize) -> Result<Self> {
        p.expect_variance(Variance::Multivector)?;
        if !p.is_homogeneous_of(deg) {
            return Err(Error::DegreeMismatch(format!("multivector is not of degree {deg}")));
        }
        Ok(Self::node(p.chart(), 1 - deg as i32, OpKind::LieDer(p.clone())))
    }

    fn same_chart(&self, other: &Self) -> Result<()> {
        if self.chart() != other.chart() {
            return Err(Error::ChartMismatch);
        }
        Ok(())
    }

    /// `[F, G] = F∘G − (−1)^{deg F · deg G} G∘F`.
    pub fn commutator(f: &Self, g: &Self) -> Result<Self> {
        f.same_chart(g)?;
        Ok(Self::node(
            f.chart(),
            f.degree() + g.degree(),
            OpKind::Commutator(f.clone(), g.clone()),
        ))
    }

    /// `F ∘ G`.
    pub fn compose(f: &Self, g: &Self) -> Result<Self> {
        f.same_chart(g)?;
        Ok(Self::node(
            f.chart(),
            f.degree() + g.degree(),
            OpKind::Compose(f.clone(), g.clone()),
        ))
    }

    /// Sum of operators of one common degree.
    pub fn sum(terms: &[Self]) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::InvalidArgument("empty operator sum".into()));
        };
        for t in &terms[1..] {
            first.same_chart(t)?;
            if t.degree() != first.degree() {
                return Err(Error::InhomogeneousSum(first.degree(), t.degree()));
            }
        }
        if terms.len() == 1 {
            return Ok(first.clone());
        }
        Ok(Self::node(first.chart(), first.degree(), OpKind::Sum(terms.to_vec())))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::sum(&[self.clone(), other.clone()])
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::sum(&[self.clone(), other.scale(&Rational::from_integer((-1).into()))])
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::node(self.chart(), self.degree(), OpKind::Scale(c.clone(), self.clone()))
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.0.chart
    }

    pub fn degree(&self) -> i32 {
        self.0.degree
    }

    pub fn kind(&self) -> &OpKind {
        &self.0.kind
    }

    /// Applies the operator to a (possibly inhomogeneous) form.
    pub fn apply(&self, omega: &GradedElement) -> Result<GradedElement> {
        omega.expect_variance(Variance::Form)?;
        if omega.chart() != self.chart() {
            return Err(Error::ChartMismatch);
        }
        Ok(self.eval(omega))
    }

    /// Components whose image would fall outside `[0, dim]` are dropped first.
    fn eval(&self, omega: &GradedElement) -> GradedElement {
        let dim = self.chart().dimension() as i32;
        let delta = self.degree();
        let pruned;
        let omega = if omega.terms().all(|(b, _)| (0..=dim).contains(&(b.grade() as i32 + delta))) {
            omega
        } else {
            pruned = omega.filter_degrees(|k| (0..=dim).contains(&(k as i32 + delta)));
            &pruned
        };
        if omega.is_zero() {
            return GradedElement::zero(self.chart(), Variance::Form);
        }
        match &self.0.kind {
            OpKind::ExtDiff => omega.exterior_derivative().expect("form"),
            OpKind::Insert(p) => p.insert_into(omega).expect("same chart"),
            OpKind::InsertMixed(delta) => delta.insert_into(omega).expect("same chart"),
            OpKind::MulForm(a) => a.wedge_unchecked(omega),
            OpKind::LieDer(p) => {
                let first = p.insert_into(&omega.d()).expect("same chart");
                let second = p.insert_into(omega).expect("same chart").d();
                // [i_P, d] = i_P d − (−1)^{p} d i_P
                if (1 - delta) % 2 == 0 {
                    &first - &second
                } else {
                    &first + &second
                }
            }
            OpKind::Commutator(f, g) => {
                let fg = f.eval(&g.eval(omega));
                let gf = g.eval(&f.eval(omega));
                if (f.degree() * g.degree()) % 2 == 0 {
                    &fg - &gf
                } else {
                    &fg + &gf
                }
            }
            OpKind::Compose(f, g) => f.eval(&g.eval(omega)),
            OpKind::Sum(ts) => ts
                .iter()
                .map(|t| t.eval(omega))
                .reduce(|a, b| &a + &b)
                .expect("nonempty sum"),
            OpKind::Scale(c, f) => f.eval(omega).scale_rational(c),
            OpKind::Zero => GradedElement::zero(self.chart(), Variance::Form),
        }
    }
}

impl fmt::Display for GradedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            OpKind::ExtDiff => write!(f, "d"),
            OpKind::Insert(p) => write!(f, "i({p})"),
            OpKind::InsertMixed(delta) => {
                let mut grouped: std::collections::BTreeMap<_, GradedElement> = Default::default();
                for ((b, j), c) in delta.terms() {
                    let dx = GradedElement::coordinate_form(delta.chart(), *j).scale(c);
                    let slot = grouped
                        .entry(*b)
                        .or_insert_with(|| GradedElement::zero(delta.chart(), Variance::Form));
                    *slot = &*slot + &dx;
                }
                if grouped.is_empty() {
                    return write!(f, "0");
                }
                for (k, (b, alpha)) in grouped.into_iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    let unit = GradedElement::from_terms(delta.chart(), Variance::Multivector, [(b, self.chart().one())]);
                    write!(f, "iv({unit}, {alpha})")?;
                }
                Ok(())
            }
            OpKind::MulForm(a) => write!(f, "mu({a})"),
            OpKind::LieDer(p) => write!(f, "L({p})"),
            OpKind::Commutator(a, b) => write!(f, "[{a}, {b}]"),
            OpKind::Compose(a, b) => write!(f, "({a}).({b})"),
            OpKind::Sum(ts) => {
                for (k, t) in ts.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            OpKind::Scale(c, a) => write!(f, "({c})*({a})"),
            OpKind::Zero => write!(f, "0"),
        }
    }
}
