//! RK4 integration of both example systems with conservation diagnostics.

use nambu::dynamics::{calogero_system, conservation_report, kepler_system, newton_equivalence_check};

fn main() -> nambu::Result<()> {
    for sys in [calogero_system(), kepler_system()] {
        for dt in [1e-3, 5e-4] {
            let traj = sys.integrate(&sys.initial_state, 10.0, dt)?;
            let rep = conservation_report(&traj, sys.chart(), &sys.hamiltonians, &sys.bindings)?;
            println!("{} dt = {dt:e}: {} steps", sys.name, traj.len() - 1);
            for (name, d) in sys.hamiltonian_names.iter().zip(&rep.drifts) {
                println!("  {name} = {:.6}  drift {:.3e}", d.initial, d.max_relative_drift);
            }
            if sys.name == "calogero" {
                let n = newton_equivalence_check(&traj, 1)?;
                println!("  r'' vs 4/r^3: {:.3e} over {} points", n.max_relative_error, n.interior_points);
            }
            println!("  final {:?}", traj.last());
        }
    }
    Ok(())
}
