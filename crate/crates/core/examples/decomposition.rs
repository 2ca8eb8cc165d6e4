//! Recover the top multivector of an operator, then split a tensorial
//! operator into an insertion and a mixed part.

use std::sync::Arc;

use nambu::cli::parse_operator;
use nambu::operator::{decompose_tensorial, extract_top_multivector, GradedOperator, TestStrategy};
use nambu::parse::parse_form;
use nambu::symbolic::Chart;

fn main() -> nambu::Result<()> {
    let chart = Arc::new(Chart::with_coordinates(&["x", "y", "z"])?);
    let strategy = TestStrategy::with_seed(0);
    let d = parse_operator("L(x*@x^@y^@z) + i(z*@x^@y)", &chart)?;
    println!("D = {d}");

    let top = extract_top_multivector(&d, 3, &strategy)?;
    println!("top multivector: {top}");
    let rest = d.sub(&GradedOperator::lie(&top)?)?;
    let parts = decompose_tensorial(&rest, 3, &strategy)?;
    println!("A = {}", parts.a);

    // a mixed term makes [D, d] fail the symbol test, but the tensorial split still works
    let t = parse_operator("i(y*@x^@z) + iv(@x^@y^@z, z*dz)", &chart)?;
    let parts = decompose_tensorial(&t, 3, &strategy)?;
    println!("T = {t}");
    println!("A = {}", parts.a);
    println!("i_Delta = {}", GradedOperator::insert_mixed(&parts.delta));

    let w = parse_form("x*dy^dz + dx^dz", &chart)?;
    println!("T(w) = {}\nrebuilt(w) = {}", t.apply(&w)?, parts.operator()?.apply(&w)?);
    Ok(())
}
