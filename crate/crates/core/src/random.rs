//! Seeded generators for functions, forms, multivectors and operators.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exterior::{Blade, GradedElement, MultivectorOneForm, Variance};
use crate::operator::GradedOperator;
use crate::symbolic::{Chart, Monomial, Polynomial, Rational, RationalFunction};

/// Deterministic sampler over one chart.
pub struct Sampler {
    chart: Arc<Chart>,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(chart: &Arc<Chart>, seed: u64) -> Self {
        Sampler {
            chart: Arc::clone(chart),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Nonzero integer in `[-3, 3]`.
    pub fn coefficient(&mut self) -> Rational {
        let v = *[-3i64, -2, -1, 1, 2, 3].choose(&mut self.rng).expect("nonempty");
        Rational::from_integer(v.into())
    }

    /// A coordinate monomial of total degree exactly `deg`.
    pub fn monomial(&mut self, deg: u32) -> Monomial {
        let mut exps = vec![0u32; self.chart.nvars()];
        for _ in 0..deg {
            exps[self.rng.gen_range(0..self.chart.dimension())] += 1;
        }
        Monomial::from_exponents(&exps)
    }

    /// A polynomial in the coordinates of degree at most `max_deg` with at most `terms` terms.
    pub fn polynomial(&mut self, max_deg: u32, terms: usize) -> Polynomial {
        let nvars = self.chart.nvars();
        let mut p = Polynomial::zero(nvars);
        let count = self.rng.gen_range(1..=terms.max(1));
        for _ in 0..count {
            let deg = self.rng.gen_range(0..=max_deg);
            let m = self.monomial(deg);
            let c = self.coefficient();
            p.add_term(m, &c);
        }
        p
    }

    /// A random polynomial function, never zero.
    pub fn function(&mut self, max_deg: u32) -> RationalFunction {
        loop {
            let p = self.polynomial(max_deg, 3);
            if !p.is_zero() {
                return RationalFunction::from_polynomial(p);
            }
        }
    }

    /// A random non-constant polynomial function.
    pub fn nonconstant_function(&mut self, max_deg: u32) -> RationalFunction {
        loop {
            let f = self.function(max_deg.max(1));
            if f.constant_value().is_none() {
                return f;
            }
        }
    }

    fn element(&mut self, variance: Variance, k: usize, max_deg: u32) -> GradedElement {
        let dim = self.chart.dimension();
        let blades = Blade::all_of_grade(dim, k);
        let mut out = GradedElement::zero(&self.chart, variance);
        if blades.is_empty() {
            return out;
        }
        let count = self.rng.gen_range(1..=blades.len().min(3));
        for _ in 0..count {
            let b = *blades.choose(&mut self.rng).expect("nonempty");
            let f = self.function(max_deg);
            out = &out + &GradedElement::from_terms(&self.chart, variance, [(b, f)]);
        }
        out
    }

    /// A random homogeneous `k`-form with polynomial coefficients.
    pub fn form(&mut self, k: usize, max_deg: u32) -> GradedElement {
        self.element(Variance::Form, k, max_deg)
    }

    /// A nonzero random homogeneous `k`-form.
    pub fn nonzero_form(&mut self, k: usize, max_deg: u32) -> GradedElement {
        loop {
            let f = self.form(k, max_deg);
            if !f.is_zero() || k > self.chart.dimension() {
                return f;
            }
        }
    }

    pub fn multivector(&mut self, k: usize, max_deg: u32) -> GradedElement {
        self.element(Variance::Multivector, k, max_deg)
    }

    pub fn nonzero_multivector(&mut self, k: usize, max_deg: u32) -> GradedElement {
        loop {
            let p = self.multivector(k, max_deg);
            if !p.is_zero() || k > self.chart.dimension() {
                return p;
            }
        }
    }

    /// A random form of random degree in `0..=dim`.
    pub fn any_form(&mut self, max_deg: u32) -> GradedElement {
        let k = self.rng.gen_range(0..=self.chart.dimension());
        self.form(k, max_deg)
    }

    /// A random section of `ΛⁿTM ⊗ T*M`.
    pub fn multivector_one_form(&mut self, n: usize, max_deg: u32) -> MultivectorOneForm {
        let dim = self.chart.dimension();
        let blades = Blade::all_of_grade(dim, n);
        let mut terms = Vec::new();
        if !blades.is_empty() {
            for _ in 0..self.rng.gen_range(1..=3) {
                let b = *blades.choose(&mut self.rng).expect("nonempty");
                let j = self.rng.gen_range(0..dim);
                terms.push(((b, j), self.function(max_deg)));
            }
        }
        MultivectorOneForm::from_terms(&self.chart, n, terms).expect("well-formed terms")
    }

    pub fn nonzero_multivector_one_form(&mut self, n: usize, max_deg: u32) -> MultivectorOneForm {
        loop {
            let delta = self.multivector_one_form(n, max_deg);
            if !delta.is_zero() || n > self.chart.dimension() {
                return delta;
            }
        }
    }

    /// A random operator of the given degree and order at most `max_order`,
    /// built from insertions, Lie derivatives, `i_Q ∘ L_X` and left
    /// multiplications, each annihilating constants.
    pub fn operator(&mut self, degree: i32, max_order: usize, max_deg: u32) -> GradedOperator {
        let dim = self.chart.dimension() as i32;
        let mut terms = Vec::new();
        let count = self.rng.gen_range(1..=3);
        let mut attempts = 0;
        while terms.len() < count && attempts < 64 {
            attempts += 1;
            let kind = self.rng.gen_range(0..6);
            let op = match kind {
                // i_P: degree −p
                0 => {
                    let p = -degree;
                    (p >= 1 && p <= dim && p as usize <= max_order).then(|| {
                        let mv = self.nonzero_multivector(p as usize, max_deg);
                        GradedOperator::insert(&mv).expect("homogeneous")
                    })
                }
                // L_P: degree 1 − p
                1 => {
                    let p = 1 - degree;
                    (p >= 1 && p <= dim && p as usize <= max_order).then(|| {
                        let mv = self.nonzero_multivector(p as usize, max_deg);
                        GradedOperator::lie(&mv).expect("homogeneous")
                    })
                }
                // μ_a ∘ i_P: degree |a| − p
                2 => {
                    let p = self.rng.gen_range(1..=dim.min(max_order as i32).max(1));
                    let a = degree + p;
                    (p <= dim && (0..=dim).contains(&a)).then(|| {
                        let mv = self.nonzero_multivector(p as usize, max_deg);
                        let form = self.nonzero_form(a as usize, max_deg);
                        GradedOperator::compose(
                            &GradedOperator::mul(&form).expect("homogeneous"),
                            &GradedOperator::insert(&mv).expect("homogeneous"),
                        )
                        .expect("same chart")
                    })
                }
                // μ_a ∘ L_P: degree |a| + 1 − p
                3 => {
                    let p = self.rng.gen_range(1..=dim.min(max_order as i32).max(1));
                    let a = degree + p - 1;
                    (p <= dim && (0..=dim).contains(&a)).then(|| {
                        let mv = self.nonzero_multivector(p as usize, max_deg);
                        let form = self.nonzero_form(a as usize, max_deg);
                        GradedOperator::compose(
                            &GradedOperator::mul(&form).expect("homogeneous"),
                            &GradedOperator::lie(&mv).expect("homogeneous"),
                        )
                        .expect("same chart")
                    })
                }
                // i_Q ∘ L_X for a vector field X: degree −q, order q + 1
                4 => {
                    let q = -degree;
                    (q >= 1 && q <= dim && (q as usize) < max_order).then(|| {
                        let mv = self.nonzero_multivector(q as usize, max_deg);
                        let x = self.nonzero_multivector(1, max_deg);
                        GradedOperator::compose(
                            &GradedOperator::insert(&mv).expect("homogeneous"),
                            &GradedOperator::lie(&x).expect("homogeneous"),
                        )
                        .expect("same chart")
                    })
                }
                // i_Δ: degree 1 − m, order m
                _ => {
                    let m = 1 - degree;
                    (m >= 1 && m <= dim && m as usize <= max_order).then(|| {
                        let delta = self.nonzero_multivector_one_form(m as usize, max_deg);
                        GradedOperator::insert_mixed(&delta)
                    })
                }
            };
            if let Some(op) = op {
                let c = self.coefficient();
                terms.push(op.scale(&c));
            }
        }
        if terms.is_empty() {
            return GradedOperator::zero(&self.chart, degree);
        }
        GradedOperator::sum(&terms).expect("equal degrees")
    }
}
