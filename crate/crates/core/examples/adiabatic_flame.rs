//! Complete-combustion state and adiabatic flame temperature of a few
//! fresh mixtures, using the reference species data.

use dustflame::thermo::{adiabatic_flame_temperature, eos_density, MixtureSample};
use dustflame::SpeciesTable;

fn main() -> dustflame::Result<()> {
    let species = SpeciesTable::reference();
    let p = 101_325.0;
    let mixtures = [
        ("stoichiometric", [0.4, 0.4, 0.0, 0.2]),
        ("lean", [0.2, 0.6, 0.0, 0.2]),
        ("rich", [0.6, 0.2, 0.0, 0.2]),
    ];
    println!(
        "{:<16} {:>10} {:>10} {:>10} {:>28}",
        "mixture", "rho_u", "theta_b", "rho_b", "burnt (yF, yO, yP, yN)"
    );
    for (name, y) in mixtures {
        let fresh = MixtureSample::new(y, 300.0)?;
        let (burnt, theta_b) = adiabatic_flame_temperature(&fresh, &species)?;
        let rho_u = eos_density(&fresh, &species, p)?;
        let rho_b = eos_density(&MixtureSample::new(burnt, theta_b)?, &species, p)?;
        println!(
            "{name:<16} {rho_u:>10.5} {theta_b:>10.3} {rho_b:>10.5}   ({:.3}, {:.3}, {:.3}, {:.3})",
            burnt[0], burnt[1], burnt[2], burnt[3]
        );
    }
    Ok(())
}
