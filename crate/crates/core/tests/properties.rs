//! Algebraic invariants under random inputs.

use std::sync::Arc;

use nambu::exterior::{GradedElement, Variance};
use nambu::nambu::NambuStructure;
use nambu::operator::{fi_residual, nested_commutator, order_at_most, GradedOperator, TestStrategy};
use nambu::parse::{format_element, format_rational_function, parse_element, parse_function};
use nambu::random::Sampler;
use nambu::symbolic::{gcd, rat, Chart, Monomial, Polynomial, Rational, RationalFunction};
use proptest::prelude::*;

fn chart3() -> Arc<Chart> {
    Arc::new(Chart::with_coordinates(&["x", "y", "z"]).unwrap())
}

fn polynomial() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -4i64..=4), 1..5).prop_map(|terms| {
        Polynomial::from_terms(
            3,
            terms
                .into_iter()
                .map(|((a, b, c), k)| (Monomial::from_exponents(&[a, b, c]), rat(k))),
        )
    })
}

fn nonzero_polynomial() -> impl Strategy<Value = Polynomial> {
    polynomial().prop_filter("nonzero", |p| !p.is_zero())
}

fn rational_function() -> impl Strategy<Value = RationalFunction> {
    (polynomial(), nonzero_polynomial()).prop_map(|(n, d)| RationalFunction::normalize(n, d).unwrap())
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-7i64..=7, 1i64..=5).prop_map(|(n, d)| Rational::new(n.into(), d.into())), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivative_is_a_derivation(f in rational_function(), g in rational_function(), v in 0usize..3) {
        let lhs = (&f * &g).derivative(v);
        let rhs = &(&f.derivative(v) * &g) + &(&f * &g.derivative(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mixed_partials_commute(f in rational_function(), a in 0usize..3, b in 0usize..3) {
        prop_assert_eq!(f.derivative(a).derivative(b), f.derivative(b).derivative(a));
    }

    #[test]
    fn normalization_is_idempotent(f in rational_function()) {
        let again = RationalFunction::normalize(f.numerator().clone(), f.denominator().clone()).unwrap();
        prop_assert_eq!(&again, &f);
        prop_assert!(gcd(f.numerator(), f.denominator()).is_one() || f.is_zero());
    }

    #[test]
    fn arithmetic_agrees_with_evaluation(f in rational_function(), g in rational_function(), p in point()) {
        let (Ok(fv), Ok(gv)) = (f.eval(&p), g.eval(&p)) else { return Ok(()) };
        prop_assert_eq!((&f + &g).eval(&p).unwrap(), &fv + &gv);
        prop_assert_eq!((&f * &g).eval(&p).unwrap(), &fv * &gv);
        prop_assert_eq!((&f - &g).eval(&p).unwrap(), &fv - &gv);
    }

    #[test]
    fn gcd_finds_planted_factors(a in polynomial(), b in polynomial(), c in nonzero_polynomial()) {
        let g = gcd(&(&a * &c), &(&b * &c));
        if !(a.is_zero() && b.is_zero()) {
            prop_assert!(g.exact_div(&c.monic()).is_some(), "gcd {:?} misses {:?}", g, c);
            prop_assert!((&a * &c).exact_div(&g).is_some());
            prop_assert!((&b * &c).exact_div(&g).is_some());
        }
    }

    #[test]
    fn print_then_parse_is_identity(f in rational_function()) {
        let c = chart3();
        let text = format_rational_function(&f, &c);
        prop_assert_eq!(parse_function(&text, &c).unwrap(), f, "{}", text);
    }

    #[test]
    fn element_round_trip(seed in any::<u64>(), k in 0usize..=3, forms in any::<bool>()) {
        let c = chart3();
        let mut s = Sampler::new(&c, seed);
        let (e, variance) = if forms {
            (s.form(k, 2), Variance::Form)
        } else {
            (s.multivector(k, 2), Variance::Multivector)
        };
        let text = format_element(&e);
        prop_assert_eq!(parse_element(&text, &c, variance).unwrap(), e, "{}", text);
    }

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), k in 0usize..=2) {
        let c = chart3();
        let w = Sampler::new(&c, seed).form(k, 3);
        prop_assert!(w.exterior_derivative().unwrap().exterior_derivative().unwrap().is_zero());
    }

    #[test]
    fn d_is_a_graded_derivation(seed in any::<u64>(), p in 0usize..=2, q in 0usize..=2) {
        let c = chart3();
        let mut s = Sampler::new(&c, seed);
        let (a, b) = (s.form(p, 2), s.form(q, 2));
        let lhs = a.wedge(&b).unwrap().exterior_derivative().unwrap();
        let first = a.exterior_derivative().unwrap().wedge(&b).unwrap();
        let second = a.wedge(&b.exterior_derivative().unwrap()).unwrap();
        let rhs = if p % 2 == 0 { &first + &second } else { &first - &second };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>(), p in 0usize..=3, q in 0usize..=3) {
        let c = chart3();
        let mut s = Sampler::new(&c, seed);
        let (a, b) = (s.form(p, 2), s.form(q, 2));
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        prop_assert_eq!(ab, if (p * q) % 2 == 0 { ba } else { -ba });
    }

    #[test]
    fn graded_jacobi(seed in any::<u64>()) {
        let c = chart3();
        let mut s = Sampler::new(&c, seed);
        let f = s.operator(-1, 2, 1);
        let g = s.operator(0, 1, 1);
        let h = s.operator(1, 1, 1);
        let w = s.any_form(2);
        let com = |a: &GradedOperator, b: &GradedOperator| GradedOperator::commutator(a, b).unwrap();
        let lhs = com(&f, &com(&g, &h)).apply(&w).unwrap();
        let sign = if (f.degree() * g.degree()).rem_euclid(2) == 0 { 1 } else { -1 };
        let r1 = com(&com(&f, &g), &h).apply(&w).unwrap();
        let r2 = com(&g, &com(&f, &h)).apply(&w).unwrap();
        let rhs = if sign == 1 { &r1 + &r2 } else { &r1 - &r2 };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn nambu_bracket_alternates(seed in any::<u64>(), i in 0usize..3, j in 0usize..3) {
        let c = chart3();
        let mut s = Sampler::new(&c, seed);
        let nb = NambuStructure::from_multivector(s.nonzero_multivector(3, 1)).unwrap();
        let fs: Vec<_> = (0..3).map(|_| s.function(2)).collect();
        let base = nb.bracket(&fs).unwrap();
        let mut t = fs.clone();
        t.swap(i, j);
        let swapped = nb.bracket(&t).unwrap();
        prop_assert_eq!(swapped, if i == j { base } else { -base });
    }

    #[test]
    fn nambu_bracket_leibniz(seed in any::<u64>(), slot in 0usize..3) {
        let c = chart3();
        let mut s = Sampler::new(&c, seed);
        let nb = NambuStructure::from_multivector(s.nonzero_multivector(3, 1)).unwrap();
        let fs: Vec<_> = (0..3).map(|_| s.function(2)).collect();
        let (g, h) = (s.function(1), s.function(1));
        let with = |x: &RationalFunction| {
            let mut t = fs.clone();
            t[slot] = x.clone();
            nb.bracket(&t).unwrap()
        };
        prop_assert_eq!(with(&(&g * &h)), &(&g * &with(&h)) + &(&with(&g) * &h));
    }

    #[test]
    fn hamiltonian_field_evaluates_the_bracket(seed in any::<u64>()) {
        let c = chart3();
        let mut s = Sampler::new(&c, seed);
        let nb = NambuStructure::from_multivector(s.nonzero_multivector(3, 1)).unwrap();
        let fs: Vec<_> = (0..2).map(|_| s.function(2)).collect();
        let g = s.function(2);
        let x = nb.hamiltonian_vf(&fs).unwrap();
        let mut all = fs.clone();
        all.push(g.clone());
        prop_assert_eq!(x.apply(&g), nb.bracket(&all).unwrap());
    }
}

fn all_basis_forms(c: &Arc<Chart>) -> Vec<GradedElement> {
    nambu::exterior::Blade::all(c.dimension())
        .into_iter()
        .map(|b| GradedElement::from_terms(c, Variance::Form, [(b, c.one())]))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn commutators_of_lie_derivative(seed in any::<u64>(), n in 1usize..=3) {
        // [L_P, μ_f] = i_(i_df P) holds; [L_P, μ_df] is exactly −L_(i_df P).
        let c = chart3();
        let mut s = Sampler::new(&c, seed);
        let p = s.nonzero_multivector(n, 1);
        let f = s.nonconstant_function(2);
        let df = GradedElement::differential(&c, &f);
        let q = p.insert_covector(&df).unwrap();
        let lp = GradedOperator::lie(&p).unwrap();
        let one = GradedOperator::commutator(&lp, &GradedOperator::mul_function(&c, &f)).unwrap();
        let two = GradedOperator::commutator(&lp, &GradedOperator::mul(&df).unwrap()).unwrap();
        let i_q = GradedOperator::insert_with_degree(&q, n - 1).unwrap();
        let l_q = GradedOperator::lie_with_degree(&q, n - 1).unwrap();
        for w in all_basis_forms(&c) {
            prop_assert_eq!(one.apply(&w).unwrap(), i_q.apply(&w).unwrap());
            prop_assert_eq!(two.apply(&w).unwrap(), -l_q.apply(&w).unwrap());
        }
    }

    #[test]
    fn residual_identity_for_any_operator(seed in any::<u64>(), n in 2usize..=3) {
        let c = chart3();
        let mut s = Sampler::new(&c, seed);
        let d = s.operator(1 - n as i32, n, 1);
        let a: Vec<_> = (0..n - 1).map(|_| s.form(1, 1)).collect();
        let mut b: Vec<_> = (0..n - 1).map(|_| s.form(1, 1)).collect();
        b.push(s.any_form(1));
        prop_assert!(fi_residual(&d, &a, &b).unwrap().is_zero());
    }

    #[test]
    fn nambu_lie_derivative_order_criterion(seed in any::<u64>(), n in 2usize..=3, mask in 0u8..4) {
        // For Nambu-Poisson P: [[..[L_P, a_1], .., a_(n−1)], L_P] has order at most n − 1.
        let c = chart3();
        let mut s = Sampler::new(&c, seed);
        let g = s.nonconstant_function(1);
        let p = if n == 2 { "@x^@y" } else { "@x^@y^@z" };
        let p = nambu::parse::parse_multivector(p, &c).unwrap().scale(&g);
        let lp = GradedOperator::lie(&p).unwrap();
        let args: Vec<GradedElement> = (0..n - 1)
            .map(|k| {
                let f = s.nonconstant_function(2);
                if mask & (1 << k) == 0 { GradedElement::function(&c, f) } else { GradedElement::differential(&c, &f) }
            })
            .collect();
        let inner = nested_commutator(&lp, &args).unwrap();
        let outer = GradedOperator::commutator(&inner, &lp).unwrap();
        let strategy = TestStrategy {
            max_generator_tuples: 30,
            monomial_coefficients: false,
            random_trials: 4,
            ..TestStrategy::with_seed(seed)
        };
        let v = order_at_most(&outer, n - 1, &strategy).unwrap();
        prop_assert!(v.passed(), "{:?}", v.witness.map(|w| w.describe()));
    }
}

#[test]
fn scalar_literal_is_a_zero_form() {
    let c = chart3();
    let e = parse_element("2", &c, Variance::Form).unwrap();
    assert_eq!(e, GradedElement::function(&c, c.constant(rat(2))));
}
