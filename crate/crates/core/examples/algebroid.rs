//! The bracket of 1-forms induced by L_P, its anchor, and the two algebroid axioms.

use std::sync::Arc;

use nambu::dynamics::calogero_system;
use nambu::nambu::{AlgebroidSamples, NambuStructure};
use nambu::parse::{parse_form, parse_function, parse_multivector};
use nambu::symbolic::Chart;

fn main() -> nambu::Result<()> {
    let chart = Arc::new(Chart::with_coordinates(&["x", "y", "z"])?);
    let nb = NambuStructure::from_multivector(parse_multivector("z*@x^@y^@z", &chart)?)?;
    let (dx, dy, dz) = (parse_form("dx", &chart)?, parse_form("dy", &chart)?, parse_form("dz", &chart)?);
    let ydx = parse_form("y*dx", &chart)?;

    println!("q(dx, dy) = {}", nb.anchor(&[dx.clone(), dy.clone()])?.as_element());
    println!("q(dx, y dx) = {}", nb.anchor(&[dx.clone(), ydx.clone()])?.as_element());
    let inner = nb.section_bracket(&[dx, ydx, dz])?;
    println!("[[dx, y dx, dz]] = {inner}");
    println!("q(dy, [[dx, y dx, dz]]) = {}", nb.anchor(&[dy, inner])?.as_element());

    let samples = AlgebroidSamples::standard(&chart, &[(parse_function("x", &chart)?, parse_function("y", &chart)?)]);
    let r = nb.algebroid_axioms_check(&samples)?;
    println!(
        "sampled {} tuples: anchor axiom {} failures in {}, Leibniz axiom {} failures in {}",
        r.sampled_tuples,
        r.axiom1_failures.len(),
        r.axiom1_checks,
        r.axiom2_failures.len(),
        r.axiom2_checks
    );

    let cal = calogero_system();
    let r = cal.structure.algebroid_axioms_check(&nambu::acceptance::algebroid_samples(&cal)?)?;
    println!("calogero: passed = {}", r.passed);
    if let Some(w) = r.axiom1_failures.first() {
        let secs: Vec<String> = w.sections.iter().map(|s| s.to_string()).collect();
        println!("  first failure on ({}): {}", secs.join(", "), w.residual);
    }
    Ok(())
}
