//! One-sided checks of order, symbol vanishing and tensoriality.
//!
//! Each check applies nested commutators with multiplication operators to a
//! family of test forms. A failure carries a witness that replays to a
//! nonzero form; a pass only certifies the trials that ran.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::exterior::{Blade, GradedElement, Variance};
use crate::random::Sampler;
use crate::symbolic::{Chart, Monomial, Polynomial, RationalFunction};

use super::calculus::{degree_of, nested_commutator};
use super::tree::GradedOperator;

/// Parameters of the generator sweep and the random trials that follow it.
#[derive(Clone, Debug, Serialize)]
pub struct TestStrategy {
    pub seed: u64,
    /// Multiplier tuples drawn from `{x_i, dx_i}`; enumerated exhaustively up to this count, sampled beyond.
    pub max_generator_tuples: usize,
    /// Also test every basis form multiplied by a coordinate monomial.
    pub monomial_coefficients: bool,
    /// Highest degree of those coefficient monomials.
    pub monomial_degree: u32,
    /// Random multiplier tuples with random test forms.
    pub random_trials: usize,
}

impl Default for TestStrategy {
    fn default() -> Self {
        TestStrategy {
            seed: 0,
            max_generator_tuples: 400,
            monomial_coefficients: true,
            monomial_degree: 3,
            random_trials: 24,
        }
    }
}

impl TestStrategy {
    pub fn with_seed(seed: u64) -> Self {
        TestStrategy {
            seed,
            ..Self::default()
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "generators {{x_i, dx_i}} (≤{} tuples) × basis forms{}; {} random trials; seed {}",
            self.max_generator_tuples,
            if self.monomial_coefficients {
                format!(" with monomial coefficients up to degree {}", self.monomial_degree)
            } else {
                String::new()
            },
            self.random_trials,
            self.seed
        )
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictStatus {
    Passed,
    Failed,
}

/// A multiplier tuple and a test form on which the nested commutator is nonzero.
#[derive(Clone, Debug)]
pub struct Witness {
    pub multipliers: Vec<GradedElement>,
    pub form: GradedElement,
    pub value: GradedElement,
}

impl Witness {
    /// Recomputes `[[...[F, a_0], ...], a_q](ω)`.
    pub fn replay(&self, f: &GradedOperator) -> Result<GradedElement> {
        nested_commutator(f, &self.multipliers)?.apply(&self.form)
    }

    pub fn describe(&self) -> String {
        let args: Vec<String> = self.multipliers.iter().map(|a| a.to_string()).collect();
        format!("multipliers ({}) on {} gives {}", args.join(", "), self.form, self.value)
    }
}

#[derive(Clone, Debug)]
pub struct OrderVerdict {
    pub claim: usize,
    pub status: VerdictStatus,
    pub witness: Option<Witness>,
    pub trials: usize,
    pub strategy: String,
}

impl OrderVerdict {
    pub fn passed(&self) -> bool {
        self.status == VerdictStatus::Passed
    }
}

struct Trial {
    multipliers: Vec<GradedElement>,
    forms: Vec<GradedElement>,
}

fn multisets(len: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, len: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            cur.push(i);
            rec(i, len, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, len, size, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Grades `k` of forms whose image under an operator of degree `delta` can be nonzero.
fn live_grades(dim: usize, delta: i32) -> Vec<usize> {
    (0..=dim).filter(|&k| (0..=dim as i32).contains(&(k as i32 + delta))).collect()
}

fn basis_forms(chart: &Arc<Chart>, delta: i32) -> Vec<GradedElement> {
    live_grades(chart.dimension(), delta)
        .into_iter()
        .flat_map(|k| Blade::all_of_grade(chart.dimension(), k))
        .map(|b| GradedElement::from_terms(chart, Variance::Form, [(b, chart.one())]))
        .collect()
}

fn with_monomial(sampler: &mut Sampler, form: &GradedElement, max_deg: u32) -> GradedElement {
    let deg = sampler.rng().gen_range(1..=max_deg.max(1));
    let m: Monomial = sampler.monomial(deg);
    let f = RationalFunction::from_polynomial(Polynomial::monomial(m, sampler.coefficient()));
    form.scale(&f)
}

fn run(f: &GradedOperator, claim: usize, trials: Vec<Trial>, strategy: &TestStrategy) -> Result<OrderVerdict> {
    let count: usize = trials.iter().map(|t| t.forms.len()).sum();
    let found = trials.par_iter().map(|t| -> Result<Option<Witness>> {
        let op = nested_commutator(f, &t.multipliers)?;
        for form in &t.forms {
            let value = op.apply(form)?;
            if !value.is_zero() {
                return Ok(Some(Witness {
                    multipliers: t.multipliers.clone(),
                    form: form.clone(),
                    value,
                }));
            }
        }
        Ok(None)
    });
    let first = found
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .transpose()?
        .flatten();
    Ok(OrderVerdict {
        claim,
        status: if first.is_some() {
            VerdictStatus::Failed
        } else {
            VerdictStatus::Passed
        },
        witness: first,
        trials: count,
        strategy: strategy.describe(),
    })
}

/// Test forms for one multiplier tuple: unit basis forms, then the same with monomial coefficients.
fn forms_for(
    sampler: &mut Sampler,
    f: &GradedOperator,
    multipliers: &[GradedElement],
    strategy: &TestStrategy,
) -> Result<Vec<GradedElement>> {
    let delta = f.degree() + multipliers.iter().map(degree_of).sum::<Result<i32>>()?;
    let basis = basis_forms(f.chart(), delta);
    let mut forms = basis.clone();
    if strategy.monomial_coefficients {
        for b in &basis {
            forms.push(with_monomial(sampler, b, strategy.monomial_degree));
        }
    }
    Ok(forms)
}

fn random_trials(
    sampler: &mut Sampler,
    f: &GradedOperator,
    size: usize,
    functions_only: bool,
    strategy: &TestStrategy,
    trials: &mut Vec<Trial>,
) -> Result<()> {
    let dim = f.chart().dimension();
    for _ in 0..strategy.random_trials {
        let multipliers: Vec<GradedElement> = (0..size)
            .map(|_| {
                if functions_only || sampler.rng().gen_bool(0.5) {
                    GradedElement::function(f.chart(), sampler.nonconstant_function(2))
                } else {
                    sampler.nonzero_form(1, 1)
                }
            })
            .collect();
        let delta = f.degree() + multipliers.iter().map(degree_of).sum::<Result<i32>>()?;
        let grades = live_grades(dim, delta);
        let Some(&k) = grades.choose(sampler.rng()) else {
            continue;
        };
        let form = sampler.nonzero_form(k, 2);
        trials.push(Trial {
            multipliers,
            forms: vec![form],
        });
    }
    Ok(())
}

/// Checks that every `(q+1)`-fold nested commutator of `F` with multiplications vanishes.
pub fn order_at_most(f: &GradedOperator, q: usize, strategy: &TestStrategy) -> Result<OrderVerdict> {
    let chart = f.chart();
    let dim = chart.dimension();
    let mut sampler = Sampler::new(chart, strategy.seed);
    let generators: Vec<GradedElement> = (0..dim)
        .map(|i| GradedElement::function(chart, chart.coordinate(i)))
        .chain((0..dim).map(|i| GradedElement::coordinate_form(chart, i)))
        .collect();
    let size = q + 1;
    let total = binomial(generators.len() + size - 1, size);
    let tuples: Vec<Vec<usize>> = if total <= strategy.max_generator_tuples {
        multisets(generators.len(), size)
    } else {
        (0..strategy.max_generator_tuples)
            .map(|_| {
                let mut t: Vec<usize> = (0..size).map(|_| sampler.rng().gen_range(0..generators.len())).collect();
                t.sort_unstable();
                t
            })
            .collect()
    };
    let mut trials = Vec::new();
    for t in tuples {
        let multipliers: Vec<GradedElement> = t.iter().map(|&i| generators[i].clone()).collect();
        let forms = forms_for(&mut sampler, f, &multipliers, strategy)?;
        if !forms.is_empty() {
            trials.push(Trial { multipliers, forms });
        }
    }
    random_trials(&mut sampler, f, size, false, strategy, &mut trials)?;
    run(f, q, trials, strategy)
}

/// `Symb_n([D, d]) = 0`, tested as `[D, d]` having order at most `n − 1`.
pub fn symb_top_vanishes(d: &GradedOperator, n: usize, strategy: &TestStrategy) -> Result<OrderVerdict> {
    if n == 0 {
        return Err(crate::Error::InvalidArgument("n must be positive".into()));
    }
    let dd = GradedOperator::commutator(d, &GradedOperator::d(d.chart()))?;
    order_at_most(&dd, n - 1, strategy)
}

/// Checks `[D, μ_f] = 0` for coordinate functions, quadratic monomials and random functions.
pub fn is_tensorial(d: &GradedOperator, strategy: &TestStrategy) -> Result<OrderVerdict> {
    let chart = d.chart();
    let dim = chart.dimension();
    let mut sampler = Sampler::new(chart, strategy.seed);
    let mut functions: Vec<RationalFunction> = (0..dim).map(|i| chart.coordinate(i)).collect();
    for i in 0..dim {
        for j in i..dim {
            functions.push(&chart.coordinate(i) * &chart.coordinate(j));
        }
    }
    let mut trials = Vec::new();
    for f in functions {
        let multipliers = vec![GradedElement::function(chart, f)];
        let forms = forms_for(&mut sampler, d, &multipliers, strategy)?;
        trials.push(Trial { multipliers, forms });
    }
    random_trials(&mut sampler, d, 1, true, strategy, &mut trials)?;
    run(d, 0, trials, strategy)
}
