//! A bivector that fails the Jacobi identity, found and explained by the
//! fundamental identity check, next to one that passes.

use std::sync::Arc;

use nambu::nambu::{FiStrategy, NambuStructure};
use nambu::parse::{format_rational_function, parse_multivector};
use nambu::symbolic::Chart;

fn main() -> nambu::Result<()> {
    let chart = Arc::new(Chart::with_coordinates(&["x", "y", "z", "w"])?);
    for text in ["@x^@y + @z^@w", "@x^@y + x*@z^@w"] {
        let mut nb = NambuStructure::from_multivector(parse_multivector(text, &chart)?)?;
        let r = nb.verify_fi(&FiStrategy::with_seed(0))?;
        println!("P = {text}: passed = {}, {} comparisons", r.passed, r.comparisons);
        if let Some(w) = &r.witness {
            let show = |fs: &[nambu::symbolic::RationalFunction]| {
                fs.iter().map(|f| format_rational_function(f, &chart)).collect::<Vec<_>>().join(", ")
            };
            println!("  f = ({}), g = ({})", show(&w.fs), show(&w.gs));
            println!("  residual {}", format_rational_function(&w.residual, &chart));
            println!("  (L_X P)(dg) {}", format_rational_function(&w.lie_residual, &chart));
        }
    }
    Ok(())
}
