//! Exact rational-function arithmetic over Q.

use std::sync::Arc;

use nambu::parse::{format_rational_function, parse_function};
use nambu::symbolic::{gcd, Chart};

fn main() -> nambu::Result<()> {
    let chart = Arc::new(Chart::new(&["x", "y"], &["k"])?);
    let show = |f: &nambu::symbolic::RationalFunction| format_rational_function(f, &chart);

    let f = parse_function("(x^2 - y^2) / (x + y)", &chart)?;
    println!("(x^2 - y^2)/(x + y) = {}", show(&f));

    let g = parse_function("k/(x*y) + 1/x", &chart)?;
    println!("k/(xy) + 1/x = {}", show(&g));
    println!("d/dx = {}", show(&g.derivative(0)));
    println!("d/dy d/dx = {}", show(&g.derivative(0).derivative(1)));

    let a = parse_function("(x + y)^3 * (x - 2*y)", &chart)?;
    let b = parse_function("(x + y)^2 * (x^2 + k)", &chart)?;
    let h = gcd(a.numerator(), b.numerator());
    println!("gcd = {}", nambu::parse::format_polynomial(&h, &chart));

    let p = [3, 2, 5].map(nambu::symbolic::rat);
    println!("g(3, 2; k = 5) = {}", g.eval(&p)?);
    Ok(())
}
