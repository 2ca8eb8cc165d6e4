//! Relative Calogero-Moser system as a 3-bracket on (z, r, p_z, p_r).

use nambu::dynamics::calogero_system;
use nambu::parse::{format_rational_function, parse_function};

fn main() -> nambu::Result<()> {
    let sys = calogero_system();
    let chart = sys.chart().clone();
    let (h, k) = (&sys.hamiltonians[0], &sys.hamiltonians[1]);
    println!("H = {}", format_rational_function(h, &chart));
    println!("K = {}", format_rational_function(k, &chart));

    for name in ["z", "r", "p_z", "p_r"] {
        let g = parse_function(name, &chart)?;
        let b = sys.structure.bracket(&[h.clone(), k.clone(), g])?;
        println!("  d{name}/dt = {{H, K, {name}}} = {}", format_rational_function(&b, &chart));
    }

    // Newton's equation for r follows from the flow: r'' = 4/r^3
    let x = sys.field()?;
    let r = parse_function("r", &chart)?;
    let rdd = x.apply(&x.apply(&r));
    println!("  r'' = {}", format_rational_function(&rdd, &chart));
    Ok(())
}
