//! Four-species data for the one-step reaction `nu_F F + nu_O O + N -> nu_P P + N`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Perfect-gas constant (J K⁻¹ mol⁻¹).
pub const GAS_CONSTANT: f64 = 8.31451;

/// Position of each species in the per-cell mass-fraction arrays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Species {
    Fuel = 0,
    Oxidant = 1,
    Product = 2,
    Neutral = 3,
}

impl Species {
    pub const ALL: [Species; 4] = [Species::Fuel, Species::Oxidant, Species::Product, Species::Neutral];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Species::Fuel => "F",
            Species::Oxidant => "O",
            Species::Product => "P",
            Species::Neutral => "N",
        }
    }
}

pub const F: usize = Species::Fuel as usize;
pub const O: usize = Species::Oxidant as usize;
pub const P: usize = Species::Product as usize;
pub const N: usize = Species::Neutral as usize;

/// Per-species constants. Arrays are indexed by [`Species`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesTable {
    /// Molar masses (kg/mol).
    molar_mass: [f64; 4],
    /// Molar stoichiometric coefficients of F, O and P.
    nu_fuel: f64,
    nu_oxidant: f64,
    nu_product: f64,
    /// Specific heats (J kg⁻¹ K⁻¹).
    cp: [f64; 4],
    /// Formation enthalpies at 0 K (J kg⁻¹).
    formation_enthalpy: [f64; 4],
    /// Density of the solid fuel (kg m⁻³).
    fuel_density: f64,
}

impl SpeciesTable {
    pub fn new(
        molar_mass: [f64; 4],
        nu: [f64; 3],
        cp: [f64; 4],
        formation_enthalpy: [f64; 4],
        fuel_density: f64,
    ) -> Result<Self> {
        if molar_mass.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::config("molar masses must be positive"));
        }
        if cp.iter().any(|c| !(*c > 0.0 && c.is_finite())) {
            return Err(Error::config("specific heats must be positive"));
        }
        if nu.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::config("stoichiometric coefficients must be positive"));
        }
        if !(fuel_density > 0.0 && fuel_density.is_finite()) {
            return Err(Error::config("fuel density must be positive"));
        }
        if formation_enthalpy.iter().any(|h| !h.is_finite()) {
            return Err(Error::config("formation enthalpies must be finite"));
        }
        let reactants = nu[0] * molar_mass[F] + nu[1] * molar_mass[O];
        let products = nu[2] * molar_mass[P];
        if (reactants - products).abs() > 1e-12 * reactants.max(products) {
            return Err(Error::config(format!(
                "reaction does not conserve mass: nu_F W_F + nu_O W_O = {reactants}, nu_P W_P = {products}"
            )));
        }
        Ok(Self {
            molar_mass,
            nu_fuel: nu[0],
            nu_oxidant: nu[1],
            nu_product: nu[2],
            cp,
            formation_enthalpy,
            fuel_density,
        })
    }

    /// Data set of the reference dust-flame test: all molar masses 20 g/mol,
    /// `F + O + N -> 2P + N`, exothermic.
    pub fn reference() -> Self {
        Self::new(
            [0.02; 4],
            [1.0, 1.0, 2.0],
            [1.0e3, 2.0e3, 4.0e3, 3.0e3],
            [1.0e6, -2.0e6, -4.0e6, 3.0e6],
            100.0,
        )
        .expect("reference species data is consistent")
    }

    pub fn molar_mass(&self, s: Species) -> f64 {
        self.molar_mass[s.index()]
    }

    pub fn cp(&self, s: Species) -> f64 {
        self.cp[s.index()]
    }

    pub fn cps(&self) -> &[f64; 4] {
        &self.cp
    }

    pub fn formation_enthalpy(&self, s: Species) -> f64 {
        self.formation_enthalpy[s.index()]
    }

    pub fn formation_enthalpies(&self) -> &[f64; 4] {
        &self.formation_enthalpy
    }

    pub fn fuel_density(&self) -> f64 {
        self.fuel_density
    }

    pub fn nu(&self, s: Species) -> f64 {
        match s {
            Species::Fuel => self.nu_fuel,
            Species::Oxidant => self.nu_oxidant,
            Species::Product => self.nu_product,
            Species::Neutral => 0.0,
        }
    }

    /// Mass of species `s` consumed (F, O) or produced (P) per mole of reaction.
    pub fn mass_per_mole(&self, s: Species) -> f64 {
        self.nu(s) * self.molar_mass(s)
    }

    /// Oxidant-to-fuel mass ratio `s = nu_O W_O / (nu_F W_F)`.
    pub fn mass_ratio(&self) -> f64 {
        self.mass_per_mole(Species::Oxidant) / self.mass_per_mole(Species::Fuel)
    }

    /// Heat released per unit of molar reaction rate: `omega_theta = q * omega`.
    pub fn heat_of_reaction(&self) -> f64 {
        self.mass_per_mole(Species::Fuel) * self.formation_enthalpy[F]
            + self.mass_per_mole(Species::Oxidant) * self.formation_enthalpy[O]
            - self.mass_per_mole(Species::Product) * self.formation_enthalpy[P]
    }

    /// Copy with a constant added to every formation enthalpy.
    pub fn with_enthalpy_shift(&self, shift: f64) -> Self {
        let mut out = self.clone();
        for h in &mut out.formation_enthalpy {
            *h += shift;
        }
        out
    }
}

impl Default for SpeciesTable {
    fn default() -> Self {
        Self::reference()
    }
}
