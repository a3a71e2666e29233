//! Configuration files: parse, echo, run, and check the manifest.

use dustflame::io::{self, RunManifest};
use dustflame::run;

const CONFIG: &str = "\
# short coarse run of the reference mixture
preset = paper-sec4
n_cells = 256
t_end = 0.02
snapshot_every = 25
";

fn main() -> dustflame::Result<()> {
    let dir = std::env::temp_dir().join("dustflame_config_example");
    let mut cfg = io::parse_config(CONFIG)?;
    cfg.out_dir = dir.clone();
    print!("{}", io::config_echo(&cfg));

    let out = run::run_simulation(&cfg)?;
    println!("snapshot steps: {:?}", out.manifest.snapshot_steps);
    let manifest = RunManifest::read(&dir)?;
    for f in &manifest.files {
        println!("{:<20} {:>8} {}", f.name, f.bytes, &f.sha256[..16]);
    }
    println!("modified files: {:?}", manifest.verify(&dir)?);

    match io::parse_config("dt = -1\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
