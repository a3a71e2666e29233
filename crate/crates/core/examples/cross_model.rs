//! Primitive run, flame velocity extraction, then the flame-velocity model
//! with that velocity, and aligned profile comparison of the two.
//!
//!     cargo run --release --example cross_model [out_root]

use std::path::PathBuf;

use dustflame::diagnostics::Field;
use dustflame::run::{self, flame_velocity_config};
use dustflame::SimulationConfig;

fn main() -> dustflame::Result<()> {
    let root: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "out/cross_model".into())
        .into();
    let mut cfg = SimulationConfig::reference();
    cfg.preset = None;
    cfg.arrhenius.prefactor = 1e8;
    cfg.arrhenius.activation_temperature = 7000.0;
    cfg.ignition_cells = 40;
    cfg.t_end = 1.8;
    cfg.snapshot_every = 1000;
    cfg.out_dir = root.join("primitive");

    let primitive = run::run_simulation(&cfg)?.report;
    let u_f = primitive
        .u_f()
        .ok_or_else(|| dustflame::Error::WaveNotSteady(primitive.failure.clone().unwrap_or_default()))?;
    println!(
        "primitive: u_p = {:.5} m/s, u_f = {u_f:.5} m/s",
        primitive.u_p().unwrap_or(f64::NAN)
    );

    let g_cfg = flame_velocity_config(&cfg, u_f, 1e-4, root.join("flame_velocity"));
    let g = run::run_simulation(&g_cfg)?.report;
    println!(
        "flame-velocity (delta = 1e-4 m): u_p = {:.5} m/s",
        g.u_p().unwrap_or(f64::NAN)
    );

    let cmp = run::compare_runs(&cfg.out_dir, &g_cfg.out_dir, &[Field::YF, Field::Theta], &[])?;
    print!("{}", cmp.csv());
    Ok(())
}
