//! G-equation front in a frozen, uniform, quiescent flow.
//!
//! The 0.5 level should move at `(rho_u / rho) u_f`. Each mesh runs to the
//! same physical time at a fixed Courant number of 0.25 based on that speed.

use dustflame::diagnostics::{fit_line, front_position, Profile};
use dustflame::{initial_state, Model, SimulationConfig, Solver};

fn front_speed(n_cells: usize, rho: f64) -> dustflame::Result<f64> {
    let speed = 1.2 / rho * 0.02;
    let mut cfg = SimulationConfig::reference();
    cfg.model = Model::FlameVelocity;
    cfg.x_right = 0.01;
    cfg.n_cells = n_cells;
    cfg.ignition_cells = n_cells / 4;
    cfg.u_f = Some(0.02);
    cfg.delta = Some(1e-4);
    cfg.rho_u = Some(1.2);
    cfg.dt = 0.25 * (cfg.x_right / n_cells as f64) / speed;
    let mut solver = Solver::new(&cfg)?;
    let mut state = initial_state(&cfg, &cfg.species, &solver.mesh)?;
    state.rho.fill(rho);
    state.rho_prev.fill(rho);

    let mut samples = Vec::new();
    for _ in 0..100 * n_cells / 512 {
        solver.g_transport_step(&mut state)?;
        state.t += solver.dt;
        let g = state.g.clone().expect("flame-velocity state");
        let x = front_position(&Profile::new(solver.mesh.centers().to_vec(), g)?, 0.5)?;
        samples.push((state.t, x));
    }
    Ok(fit_line(&samples)?.slope)
}

fn main() -> dustflame::Result<()> {
    let rho = 0.6;
    let exact = 1.2 / rho * 0.02;
    println!("exact speed {exact:.6} m/s");
    for n in [128, 256, 512, 1024, 2048] {
        let s = front_speed(n, rho)?;
        println!("{n:>5} cells: {s:.6} m/s  (error {:+.3}%)", 100.0 * (s - exact) / exact);
    }
    Ok(())
}
