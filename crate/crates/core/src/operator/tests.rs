use std::sync::Arc;

use super::*;
use crate::exterior::{Blade, GradedElement, MultivectorOneForm, Variance};
use crate::parse::{parse_form, parse_function, parse_multivector};
use crate::random::Sampler;
use crate::symbolic::{rat, Chart, RationalFunction};

fn chart(names: &[&str]) -> Arc<Chart> {
    Arc::new(Chart::with_coordinates(names).unwrap())
}

fn form(c: &Arc<Chart>, s: &str) -> GradedElement {
    parse_form(s, c).unwrap()
}

fn mv(c: &Arc<Chart>, s: &str) -> GradedElement {
    parse_multivector(s, c).unwrap()
}

fn func(c: &Arc<Chart>, s: &str) -> RationalFunction {
    parse_function(s, c).unwrap()
}

fn one(c: &Arc<Chart>) -> GradedElement {
    GradedElement::one(c, Variance::Form)
}

fn quick() -> TestStrategy {
    TestStrategy {
        max_generator_tuples: 200,
        random_trials: 8,
        ..TestStrategy::default()
    }
}

#[test]
fn apply_examples() {
    let c = chart(&["x", "y"]);
    let d = GradedOperator::d(&c);
    assert_eq!(d.apply(&form(&c, "x^2")).unwrap(), form(&c, "2*x*dx"));
    let ix = GradedOperator::insert(&mv(&c, "@x")).unwrap();
    let mdx = GradedOperator::mul(&form(&c, "dx")).unwrap();
    let comm = GradedOperator::commutator(&ix, &mdx).unwrap();
    assert_eq!(comm.degree(), 0);
    assert_eq!(comm.apply(&one(&c)).unwrap(), one(&c));
    let lp = GradedOperator::lie(&mv(&c, "@x^@y")).unwrap();
    let mx = GradedOperator::mul_function(&c, &func(&c, "x"));
    let lpx = GradedOperator::commutator(&lp, &mx).unwrap();
    assert_eq!(lpx.apply(&form(&c, "dy")).unwrap(), one(&c));
}

#[test]
fn commutator_examples() {
    let c = chart(&["x", "y", "z"]);
    let mut s = Sampler::new(&c, 7);
    let d = GradedOperator::d(&c);
    let dd = GradedOperator::commutator(&d, &d).unwrap();
    let p = s.nonzero_multivector(2, 2);
    let ip = GradedOperator::insert(&p).unwrap();
    let lie_a = GradedOperator::commutator(&ip, &d).unwrap();
    let lie_b = GradedOperator::lie(&p).unwrap();
    let f = GradedOperator::mul_function(&c, &s.function(2));
    let g = GradedOperator::mul_function(&c, &s.function(2));
    let ff = GradedOperator::commutator(&GradedOperator::commutator(&lie_b, &f).unwrap(), &g).unwrap();
    for _ in 0..10 {
        let w = s.any_form(2);
        assert!(dd.apply(&w).unwrap().is_zero());
        assert_eq!(lie_a.apply(&w).unwrap(), lie_b.apply(&w).unwrap());
        assert!(ff.apply(&w).unwrap().is_zero());
    }
}

#[test]
fn graded_antisymmetry_and_jacobi() {
    let c = chart(&["x", "y", "z"]);
    let mut s = Sampler::new(&c, 11);
    for _ in 0..6 {
        let f = s.operator(-1, 2, 1);
        let g = GradedOperator::mul(&s.nonzero_form(1, 1)).unwrap();
        let h = s.operator(0, 2, 1);
        let fg = GradedOperator::commutator(&f, &g).unwrap();
        let gf = GradedOperator::commutator(&g, &f).unwrap();
        let lhs = GradedOperator::commutator(&f, &GradedOperator::commutator(&g, &h).unwrap()).unwrap();
        let r1 = GradedOperator::commutator(&fg, &h).unwrap();
        let r2 = GradedOperator::commutator(&g, &GradedOperator::commutator(&f, &h).unwrap()).unwrap();
        let sign = if (f.degree() * g.degree()) % 2 == 0 { 1 } else { -1 };
        for _ in 0..3 {
            let w = s.any_form(1);
            let a = fg.apply(&w).unwrap();
            let b = gf.apply(&w).unwrap();
            assert_eq!(a, if sign > 0 { -b } else { b });
            let jac = &(&lhs.apply(&w).unwrap() - &r1.apply(&w).unwrap())
                - &r2.apply(&w).unwrap().scale_rational(&rat(sign));
            assert!(jac.is_zero());
        }
    }
}

#[test]
fn phi_examples() {
    let c = chart(&["x", "y"]);
    let lp = GradedOperator::lie(&mv(&c, "@x^@y")).unwrap();
    let x = GradedElement::function(&c, func(&c, "x"));
    let y = GradedElement::function(&c, func(&c, "y"));
    // two functions under a degree −1 operator land in degree −1
    assert!(phi(&lp, &[x.clone(), y.clone()]).unwrap().is_zero());
    // L_P(y dx) = i_P(dy∧dx) = −1 with i_{∂x∧∂y}(dx∧dy) = 1 and L_P = [i_P, d]
    assert_eq!(phi(&lp, &[form(&c, "dx"), y.clone()]).unwrap(), -one(&c));
    assert_eq!(function_bracket(&lp, &[func(&c, "x"), func(&c, "y")]).unwrap(), func(&c, "-1"));
    let c3 = chart(&["x", "y", "z"]);
    let mut s = Sampler::new(&c3, 3);
    let d = GradedOperator::lie(&s.nonzero_multivector(3, 2)).unwrap();
    let a = s.nonzero_form(1, 2);
    let b = s.nonzero_form(1, 2);
    assert!(phi(&d, &[a.clone(), b.clone(), a.clone()]).unwrap().is_zero());
    assert!(phi(&d, &[b.clone(), b.clone(), a]).unwrap().is_zero());
}

#[test]
fn filippov_bracket_examples() {
    let c = chart(&["x", "y"]);
    let lp = GradedOperator::lie(&mv(&c, "@x^@y")).unwrap();
    assert!(filippov_bracket(&lp, &[form(&c, "dx"), form(&c, "dy")]).unwrap().is_zero());
    assert!(filippov_bracket(&lp, &[form(&c, "dx^dy"), form(&c, "dy")]).is_err());
    let c3 = chart(&["x", "y", "z"]);
    let mut s = Sampler::new(&c3, 5);
    let p = s.nonzero_multivector(3, 1);
    let d = GradedOperator::lie(&p).unwrap();
    for _ in 0..4 {
        let fs: Vec<RationalFunction> = (0..3).map(|_| s.function(2)).collect();
        let dfs: Vec<GradedElement> = fs.iter().map(|f| GradedElement::differential(&c3, f)).collect();
        let w = dfs.iter().cloned().reduce(|a, b| a.wedge(&b).unwrap()).unwrap();
        let bracket = p.pair(&w).unwrap();
        assert_eq!(
            filippov_bracket(&d, &dfs).unwrap(),
            GradedElement::differential(&c3, &bracket)
        );
    }
}

#[test]
fn koszul_examples() {
    let c = chart(&["x", "y"]);
    let lp = GradedOperator::lie(&mv(&c, "@x^@y")).unwrap();
    let x = GradedElement::function(&c, func(&c, "x"));
    let y = GradedElement::function(&c, func(&c, "y"));
    assert!(koszul_binary_expansion_check(&lp, &x, &y).unwrap().is_zero());
    assert!(koszul_binary_expansion_check(&lp, &form(&c, "dx"), &y).unwrap().is_zero());
    assert!(koszul_binary_expansion_check(&lp, &form(&c, "dx"), &form(&c, "dx")).unwrap().is_zero());
    assert!(koszul_binary_expansion_check(&GradedOperator::d(&c), &x, &y).is_err());
    let mut s = Sampler::new(&c, 9);
    for _ in 0..8 {
        let d = s.operator(-1, 2, 1);
        let a = s.any_form(2);
        let b = s.any_form(2);
        if a.homogeneous_degree().is_none() || b.homogeneous_degree().is_none() {
            continue;
        }
        assert!(koszul_binary_expansion_check(&d, &a, &b).unwrap().is_zero());
    }
}

#[test]
fn fi_residual_vanishes_for_random_operators() {
    for (n, names) in [(2usize, vec!["x", "y", "z"]), (3, vec!["x", "y", "z"])] {
        let c = chart(&names);
        let mut s = Sampler::new(&c, 21 + n as u64);
        for _ in 0..4 {
            let deg = s.rng().gen_range(-(n as i32 - 1)..=0);
            let d = s.operator(deg, n, 1);
            let a: Vec<_> = (0..n - 1).map(|_| s.nonzero_form(1, 1)).collect();
            let b: Vec<_> = (0..n).map(|_| s.nonzero_form(1, 1)).collect();
            let r = fi_residual(&d, &a, &b).unwrap();
            assert!(r.is_zero(), "operator {d}");
        }
    }
}

#[test]
fn fi_residual_term_vanishes_for_poisson() {
    let c = chart(&["x", "y", "z"]);
    let mut s = Sampler::new(&c, 2);
    // a constant-coefficient bivector is Poisson
    let d = GradedOperator::lie(&mv(&c, "@x^@y + 2*@y^@z")).unwrap();
    for _ in 0..4 {
        let a = vec![s.nonzero_form(1, 2)];
        let b = vec![s.nonzero_form(1, 2), s.nonzero_form(1, 2)];
        let e = fi_expansion(&d, &a, &b).unwrap();
        assert!(e.residual_term.is_zero());
        assert_eq!(e.lhs, e.derivation_terms);
    }
}

#[test]
fn order_examples() {
    let c = chart(&["x", "y", "z"]);
    let st = quick();
    let p = mv(&c, "x*@x^@y + z^2*@y^@z");
    assert!(order_at_most(&GradedOperator::insert(&p).unwrap(), 2, &st).unwrap().passed());
    assert!(order_at_most(&GradedOperator::lie(&p).unwrap(), 2, &st).unwrap().passed());
    let d = GradedOperator::d(&c);
    let v = order_at_most(&d, 0, &st).unwrap();
    assert!(!v.passed());
    let w = v.witness.unwrap();
    assert!(!w.replay(&d).unwrap().is_zero());
    assert_eq!(w.replay(&d).unwrap(), w.value);
    assert!(order_at_most(&d, 1, &st).unwrap().passed());
    assert!(!order_at_most(&GradedOperator::lie(&p).unwrap(), 1, &st).unwrap().passed());
}

#[test]
fn symbol_examples() {
    let c = chart(&["x", "y"]);
    let st = quick();
    let n = mv(&c, "x*y*@x^@y");
    let a = mv(&c, "y*@x + @y");
    let ln = GradedOperator::lie(&n).unwrap();
    assert!(symb_top_vanishes(&ln, 2, &st).unwrap().passed());
    let mixed = ln.add(&GradedOperator::insert(&a).unwrap()).unwrap();
    assert!(symb_top_vanishes(&mixed, 2, &st).unwrap().passed());
    let delta = MultivectorOneForm::tensor(&mv(&c, "@x^@y"), &form(&c, "dx")).unwrap();
    let idelta = GradedOperator::insert_mixed(&delta);
    assert!(!symb_top_vanishes(&idelta, 2, &st).unwrap().passed());
}

#[test]
fn tensoriality_examples() {
    let c = chart(&["x", "y", "z"]);
    let st = quick();
    let p = mv(&c, "x*@x^@y + @z");
    let p = p.component(2);
    assert!(is_tensorial(&GradedOperator::insert(&p).unwrap(), &st).unwrap().passed());
    let v = is_tensorial(&GradedOperator::lie(&p).unwrap(), &st).unwrap();
    assert!(!v.passed());
    assert!(v.witness.unwrap().multipliers[0].is_homogeneous_of(0));
    assert!(is_tensorial(&GradedOperator::mul(&form(&c, "y*dx")).unwrap(), &st).unwrap().passed());
}

#[test]
fn lie_derivative_commutators() {
    let c = chart(&["x", "y", "z"]);
    let mut s = Sampler::new(&c, 13);
    for deg in [2usize, 3] {
        let p = s.nonzero_multivector(deg, 2);
        let lp = GradedOperator::lie(&p).unwrap();
        for _ in 0..3 {
            let f = s.function(2);
            let df = GradedElement::differential(&c, &f);
            let idf_p = p.insert_covector(&df).unwrap();
            let lhs1 = GradedOperator::commutator(&lp, &GradedOperator::mul_function(&c, &f)).unwrap();
            let rhs1 = GradedOperator::insert_with_degree(&idf_p, deg - 1).unwrap();
            let lhs2 = GradedOperator::commutator(&lp, &GradedOperator::mul(&df).unwrap()).unwrap();
            let rhs2 = GradedOperator::lie_with_degree(&idf_p, deg - 1).unwrap();
            for b in Blade::all(3) {
                let w = GradedElement::from_terms(&c, Variance::Form, [(b, c.one())]);
                assert_eq!(lhs1.apply(&w).unwrap(), rhs1.apply(&w).unwrap());
                // Jacobi gives [L_P, [d, f]] = (−1)^{1−p}[d, i_Q] = −L_Q
                assert_eq!(lhs2.apply(&w).unwrap(), -rhs2.apply(&w).unwrap());
            }
        }
    }
}

#[test]
fn function_bracket_and_skew_defect() {
    let c = chart(&["x", "y", "z"]);
    let lp = GradedOperator::lie(&mv(&c, "@x^@y^@z")).unwrap();
    let xyz = [func(&c, "x"), func(&c, "y"), func(&c, "z")];
    assert!(function_bracket(&lp, &xyz).unwrap().is_one());
    let (sum, predicted) = last_pair_skew_defect(&lp, &xyz).unwrap();
    assert!(sum.is_zero() && predicted.is_zero());

    // i_Z ∘ L_X gives {f, g} = Z(f) X(g)
    let c2 = chart(&["x", "y"]);
    let d = GradedOperator::compose(
        &GradedOperator::insert(&mv(&c2, "@x")).unwrap(),
        &GradedOperator::lie(&mv(&c2, "@y")).unwrap(),
    )
    .unwrap();
    let fs = [func(&c2, "x"), func(&c2, "y")];
    assert!(function_bracket(&d, &fs).unwrap().is_one());
    let (sum, predicted) = last_pair_skew_defect(&d, &fs).unwrap();
    assert!(sum.is_one());
    assert_eq!(sum, predicted);
    assert!(!symb_top_vanishes(&d, 2, &quick()).unwrap().passed());
    // tensorial operators give the zero bracket
    let delta = MultivectorOneForm::tensor(&mv(&c2, "@x^@y"), &form(&c2, "dx")).unwrap();
    let id = GradedOperator::insert_mixed(&delta);
    assert!(function_bracket(&id, &fs).unwrap().is_zero());
    let mut s = Sampler::new(&c, 17);
    for _ in 0..5 {
        let d = s.operator(-2, 3, 1);
        let fs: Vec<_> = (0..3).map(|_| s.function(2)).collect();
        let (sum, predicted) = last_pair_skew_defect(&d, &fs).unwrap();
        assert_eq!(sum, predicted, "operator {d}");
    }
    // n = 3: i_(@x^@y) ∘ L_(x@z) has {x, y, z} + {x, z, y} = x
    let d = GradedOperator::compose(
        &GradedOperator::insert(&mv(&c, "@x^@y")).unwrap(),
        &GradedOperator::lie(&mv(&c, "x*@z")).unwrap(),
    )
    .unwrap();
    let (sum, predicted) = last_pair_skew_defect(&d, &xyz).unwrap();
    assert!(!sum.is_zero());
    assert_eq!(sum, predicted);
}

#[test]
fn extraction_and_decomposition() {
    let c = chart(&["x", "y", "z"]);
    let st = quick();
    let mut s = Sampler::new(&c, 29);
    for n in [2usize, 3] {
        let p = s.nonzero_multivector(n, 2);
        let lp = GradedOperator::lie(&p).unwrap();
        assert_eq!(extract_top_multivector(&lp, n, &st).unwrap(), p);
        let a = s.nonzero_multivector(n - 1, 2);
        let with_a = lp.add(&GradedOperator::insert(&a).unwrap()).unwrap();
        assert_eq!(extract_top_multivector(&with_a, n, &st).unwrap(), p);
        let delta = s.nonzero_multivector_one_form(n, 2);
        let tens = GradedOperator::insert(&a)
            .unwrap()
            .add(&GradedOperator::insert_mixed(&delta))
            .unwrap();
        let dec = decompose_tensorial(&tens, n, &st).unwrap();
        assert_eq!(dec.a, a);
        assert_eq!(dec.delta, delta);
        assert!(matches!(
            decompose_tensorial(&lp, n, &st),
            Err(crate::Error::NotTensorial(_))
        ));
    }
    let c2 = chart(&["x", "y"]);
    let delta = MultivectorOneForm::tensor(&mv(&c2, "@x^@y"), &form(&c2, "dx")).unwrap();
    assert!(matches!(
        extract_top_multivector(&GradedOperator::insert_mixed(&delta), 2, &st),
        Err(crate::Error::TopSymbolNotMultivector(_))
    ));
    let zero = GradedOperator::zero(&c2, -1);
    let dec = decompose_tensorial(&zero, 2, &st).unwrap();
    assert!(dec.a.is_zero() && dec.delta.is_zero());
}

use rand::Rng;
