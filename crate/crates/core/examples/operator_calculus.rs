//! Graded operators on forms: Lie derivatives along multivectors, commutators
//! with multiplication operators, and the bracket an operator induces on functions.

use std::sync::Arc;

use nambu::operator::{function_bracket, GradedOperator};
use nambu::parse::{format_rational_function, parse_form, parse_function, parse_multivector};
use nambu::symbolic::Chart;

fn main() -> nambu::Result<()> {
    let chart = Arc::new(Chart::with_coordinates(&["x", "y", "z"])?);
    let p = parse_multivector("z*@x^@y^@z", &chart)?;
    let lp = GradedOperator::lie(&p)?;
    println!("L_P = {lp}, degree {}", lp.degree());

    let f = parse_function("x*y", &chart)?;
    let df = nambu::exterior::GradedElement::differential(&chart, &f);
    let q = p.insert_covector(&df)?;
    println!("i_df P = {q}");

    let with_f = GradedOperator::commutator(&lp, &GradedOperator::mul_function(&chart, &f))?;
    let with_df = GradedOperator::commutator(&lp, &GradedOperator::mul(&df)?)?;
    let i_q = GradedOperator::insert_with_degree(&q, 2)?;
    let l_q = GradedOperator::lie_with_degree(&q, 2)?;
    for w in ["dx^dy", "x*dy^dz", "y*dx^dz"] {
        let w = parse_form(w, &chart)?;
        println!("on {w}:");
        println!("  [L_P, f]  = {}   i_(i_df P) = {}", with_f.apply(&w)?, i_q.apply(&w)?);
        println!("  [L_P, df] = {}   L_(i_df P) = {}", with_df.apply(&w)?, l_q.apply(&w)?);
    }

    let fs = ["x", "y", "z"].map(|t| parse_function(t, &chart).unwrap());
    let b = function_bracket(&lp, &fs)?;
    println!("{{x, y, z}} from L_P = {}", format_rational_function(&b, &chart));
    Ok(())
}
