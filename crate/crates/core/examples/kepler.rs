//! Kepler problem in action-angle-like coordinates: a 6-bracket with five
//! Hamiltonians whose field moves only the angles.

use nambu::dynamics::kepler_system;
use nambu::nambu::FiStrategy;
use nambu::parse::format_rational_function;

fn main() -> nambu::Result<()> {
    let mut sys = kepler_system();
    let chart = sys.chart().clone();
    println!("P = {}", sys.structure.multivector());

    let x = sys.structure.hamiltonian_vf(&sys.hamiltonians)?;
    for i in 0..chart.dimension() {
        println!("  dx/dt[{}] = {}", chart.variable_name(i), format_rational_function(&x.component(i), &chart));
    }

    // every Hamiltonian is conserved by the flow it generates
    for (name, h) in sys.hamiltonian_names.iter().zip(&sys.hamiltonians) {
        println!("  X({name}) = {}", format_rational_function(&x.apply(h), &chart));
    }

    let report = sys.structure.verify_fi(&FiStrategy::with_seed(0))?;
    println!("fundamental identity: passed = {}, routes agree = {}", report.passed, report.routes_agree);
    Ok(())
}
