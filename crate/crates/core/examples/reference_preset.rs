//! The reference preset (A = 1e4, T_a = 900 K, 300 K fresh gas).
//!
//! The reaction rate at 300 K is already e^{-3} of its hot value, so the
//! whole tube heats up within a fraction of a second instead of carrying a
//! front. This example prints the fresh-gas temperature far from the
//! ignition point and whether a temperature front can still be located.

use dustflame::diagnostics::{front_position, Field, Profile};
use dustflame::run::{theta_front_level, Simulation};
use dustflame::SimulationConfig;

fn main() -> dustflame::Result<()> {
    let cfg = SimulationConfig::reference();
    let level = theta_front_level(&cfg)?;
    let mut sim = Simulation::new(&cfg)?;
    let far = cfg.n_cells - 1;
    println!(
        "{:>6} {:>12} {:>12} {:>14}",
        "t", "theta(far)", "yF(far)", "theta front"
    );
    while !sim.finished() {
        sim.step()?;
        if sim.state.step % 250 == 0 {
            let p = Profile::from_state(&sim.state, &sim.solver.mesh, Field::Theta)?;
            let front = match front_position(&p, level) {
                Ok(x) => format!("{x:.5}"),
                Err(_) => "none".into(),
            };
            println!(
                "{:>6.3} {:>12.2} {:>12.5} {:>14}",
                sim.state.t, sim.state.theta[far], sim.state.y[far][0], front
            );
        }
    }
    let report = sim.report();
    println!("steady: {} ({})", report.steady, report.failure.unwrap_or_default());
    Ok(())
}
