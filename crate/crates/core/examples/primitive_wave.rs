//! Travelling flame with the primitive (Arrhenius) model.
//!
//! Uses a high activation temperature so that the fresh gas stays cold
//! ahead of the front, and a wider ignition zone so the kernel does not
//! quench. Prints the wave report: front speed, plateau states and the
//! flame velocity from the jump conditions.
//!
//!     cargo run --release --example primitive_wave [out_dir]

use dustflame::{io, run, SimulationConfig};

fn main() -> dustflame::Result<()> {
    let mut cfg = SimulationConfig::reference();
    cfg.preset = None;
    cfg.arrhenius.prefactor = 1e8;
    cfg.arrhenius.activation_temperature = 7000.0;
    cfg.ignition_cells = 40;
    cfg.t_end = 1.8;
    cfg.snapshot_every = 500;
    cfg.out_dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "out/primitive_wave".into())
        .into();

    let out = run::run_simulation(&cfg)?;
    print!("{}", io::report_text(cfg.model, &out.report));
    println!("# {} snapshots in {}", out.snapshots.len(), cfg.out_dir.display());
    Ok(())
}
