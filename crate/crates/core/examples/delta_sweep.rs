//! Sweep of the flame-velocity length scale `delta` against one primitive
//! reference run. Member runs execute in parallel.
//!
//!     cargo run --release --example delta_sweep [out_root]

use std::path::PathBuf;

use dustflame::{run, SimulationConfig};

fn main() -> dustflame::Result<()> {
    let root: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "out/delta_sweep".into())
        .into();
    let mut cfg = SimulationConfig::reference();
    cfg.preset = None;
    cfg.n_cells = 1024;
    cfg.arrhenius.prefactor = 1e8;
    cfg.arrhenius.activation_temperature = 7000.0;
    cfg.ignition_cells = 20;
    cfg.t_end = 1.8;
    cfg.snapshot_every = 1000;

    let result = run::sweep(&cfg, &[5e-5, 1e-4, 2e-4, 4e-4], &root, None)?;
    println!("reference u_f = {:.5} m/s", result.u_f);
    print!("{}", result.csv());
    Ok(())
}
