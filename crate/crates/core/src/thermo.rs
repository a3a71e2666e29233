//! Mixture thermodynamics: equation of state, specific heat, the reduced
//! variable `z`, and the adiabatic flame temperature.

use crate::error::{Error, Result};
use crate::species::GAS_CONSTANT;
use crate::species::{Species, SpeciesTable, F, N, O, P};

/// Rounding slack allowed on mass fractions before a value is treated as a
/// scheme defect rather than clipped.
pub const FRACTION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureSample {
    pub y: [f64; 4],
    pub theta: f64,
}

impl MixtureSample {
    pub fn new(y: [f64; 4], theta: f64) -> Result<Self> {
        if y.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Domain(format!("mass fractions out of [0,1]: {y:?}")));
        }
        let sum: f64 = y.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("mass fractions sum to {sum}")));
        }
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::Domain(format!("temperature must be positive, got {theta}")));
        }
        Ok(Self { y, theta })
    }
}

/// Density of a perfect-gas mixture carrying incompressible solid fuel.
pub fn eos_density(s: &MixtureSample, species: &SpeciesTable, p_th: f64) -> Result<f64> {
    if !(s.theta > 0.0) {
        return Err(Error::Domain(format!("temperature must be positive, got {}", s.theta)));
    }
    if !(p_th > 0.0) {
        return Err(Error::Domain(format!("pressure must be positive, got {p_th}")));
    }
    let v = specific_volume(&s.y, s.theta, species, p_th);
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Domain("mixture has no volume".into()));
    }
    Ok(1.0 / v)
}

/// Unchecked specific volume used by the solvers on already-validated cells.
#[inline]
pub(crate) fn specific_volume(y: &[f64; 4], theta: f64, species: &SpeciesTable, p_th: f64) -> f64 {
    let moles = y[O] / species.molar_mass(Species::Oxidant)
        + y[P] / species.molar_mass(Species::Product)
        + y[N] / species.molar_mass(Species::Neutral);
    GAS_CONSTANT * theta / p_th * moles + y[F] / species.fuel_density()
}

/// `z = (s y_F + 1 - y_O) / (1 + s)`.
#[inline]
pub fn reduced_z(y_f: f64, y_o: f64, species: &SpeciesTable) -> f64 {
    let s = species.mass_ratio();
    (s * y_f + 1.0 - y_o) / (1.0 + s)
}

/// Inverse of [`reduced_z`] for `y_O`, clipped to [0,1].
///
/// Values more than [`FRACTION_TOLERANCE`] outside the unit interval are
/// reported as a consistency error.
pub fn y_o_from_z(z: f64, y_f: f64, species: &SpeciesTable) -> Result<f64> {
    let s = species.mass_ratio();
    let y_o = 1.0 + s * y_f - (1.0 + s) * z;
    clip_fraction(y_o, "yO", 0)
}

pub(crate) fn clip_fraction(v: f64, field: &'static str, cell: usize) -> Result<f64> {
    if !(-FRACTION_TOLERANCE..=1.0 + FRACTION_TOLERANCE).contains(&v) {
        return Err(Error::Consistency { field, cell, value: v });
    }
    Ok(v.clamp(0.0, 1.0))
}

/// `sum_i y_i c_{p,i}`.
#[inline]
pub fn mixture_cp(y: &[f64; 4], species: &SpeciesTable) -> f64 {
    y.iter().zip(species.cps()).map(|(y, c)| y * c).sum()
}

/// Specific total enthalpy `sum_i y_i (c_{p,i} theta + dh_i)`, formation
/// enthalpies referenced at 0 K.
pub fn total_enthalpy(y: &[f64; 4], theta: f64, species: &SpeciesTable) -> f64 {
    y.iter()
        .zip(species.cps().iter().zip(species.formation_enthalpies()))
        .map(|(y, (c, h))| y * (c * theta + h))
        .sum()
}

/// Composition after complete combustion of `y`: the limiting reactant is
/// exhausted and the product absorbs the consumed mass.
pub fn complete_combustion(y: &[f64; 4], species: &SpeciesTable) -> [f64; 4] {
    let s = species.mass_ratio();
    let burnt_fuel = y[F].min(y[O] / s);
    let mut out = *y;
    out[F] = y[F] - burnt_fuel;
    out[O] = (y[O] - s * burnt_fuel).max(0.0);
    if out[F] < 0.0 {
        out[F] = 0.0;
    }
    out[P] = 1.0 - out[F] - out[O] - out[N];
    out
}

/// Burnt composition and temperature of an isobaric, adiabatic complete
/// combustion of `unburnt`.
pub fn adiabatic_flame_temperature(unburnt: &MixtureSample, species: &SpeciesTable) -> Result<([f64; 4], f64)> {
    let burnt = complete_combustion(&unburnt.y, species);
    let h = total_enthalpy(&unburnt.y, unburnt.theta, species);
    let formation: f64 = burnt
        .iter()
        .zip(species.formation_enthalpies())
        .map(|(y, h)| y * h)
        .sum();
    let theta_b = (h - formation) / mixture_cp(&burnt, species);
    if !(theta_b > 0.0) {
        return Err(Error::Domain(format!(
            "complete combustion gives nonpositive temperature {theta_b}"
        )));
    }
    Ok((burnt, theta_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table() -> SpeciesTable {
        SpeciesTable::reference()
    }

    fn reference_unburnt() -> MixtureSample {
        MixtureSample::new([0.4, 0.4, 0.0, 0.2], 300.0).unwrap()
    }

    #[test]
    fn pure_fuel_density_is_solid_density() {
        for theta in [1.0, 300.0, 5000.0] {
            let s = MixtureSample::new([1.0, 0.0, 0.0, 0.0], theta).unwrap();
            assert_eq!(eos_density(&s, &table(), 101325.0).unwrap(), 100.0);
        }
    }

    #[test]
    fn neutral_gas_density() {
        let s = MixtureSample::new([0.0, 0.0, 0.0, 1.0], 300.0).unwrap();
        let rho = eos_density(&s, &table(), 101325.0).unwrap();
        // 101325 * 0.02 / (8.31451 * 300) = 2026.5 / 2494.353
        assert!((rho - 0.812_435_1).abs() < 1e-6, "{rho}");
        assert!((rho - 101325.0 * 0.02 / (GAS_CONSTANT * 300.0)).abs() < 1e-15);
    }

    #[test]
    fn reference_mixture_density() {
        // (R*300/101325)*(0.4 + 0.2)/0.02 + 0.4/100 = 0.738518...+0.004
        let rho = eos_density(&reference_unburnt(), &table(), 101325.0).unwrap();
        let by_hand = 1.0 / (8.31451 * 300.0 / 101325.0 * 30.0 + 0.004);
        assert!((rho - by_hand).abs() < 1e-14);
        assert!((rho - 1.3467).abs() < 1e-4, "{rho}");
    }

    #[test]
    fn eos_rejects_bad_inputs() {
        let s = MixtureSample {
            y: [0.0, 0.0, 0.0, 1.0],
            theta: 0.0,
        };
        assert!(eos_density(&s, &table(), 101325.0).is_err());
        assert!(MixtureSample::new([0.5, 0.4, 0.0, 0.0], 300.0).is_err());
    }

    #[test]
    fn z_symmetric_and_endpoints() {
        let t = table();
        assert_eq!(reduced_z(0.3, 0.3, &t), 0.5);
        assert_eq!(reduced_z(1.0, 0.0, &t), 1.0);
        assert_eq!(reduced_z(0.0, 1.0, &t), 0.0);
    }

    #[test]
    fn y_o_inverse_examples() {
        let t = table();
        assert!((y_o_from_z(0.5, 0.4, &t).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(y_o_from_z(1.0, 1.0, &t).unwrap(), 0.0);
        // 1 + 0 - 2*0.5
        assert_eq!(y_o_from_z(0.5, 0.0, &t).unwrap(), 0.0);
        assert!(y_o_from_z(0.9, 0.0, &t).is_err());
        assert_eq!(y_o_from_z(0.5 + 1e-12, 0.0, &t).unwrap(), 0.0);
    }

    #[test]
    fn mixture_cp_examples() {
        let t = table();
        assert_eq!(mixture_cp(&[0.4, 0.4, 0.0, 0.2], &t), 1800.0);
        assert_eq!(mixture_cp(&[0.0, 0.0, 0.0, 1.0], &t), 3000.0);
        assert!((mixture_cp(&[0.0, 0.0, 0.8, 0.2], &t) - 3800.0).abs() < 1e-12);
    }

    /// Enthalpy balance solved by hand:
    ///   unburnt: 0.4*(1e3*300 + 1e6) + 0.4*(2e3*300 - 2e6) + 0.2*(3e3*300 + 3e6) = 7.4e5
    ///   burnt:   0.8*(4e3*T - 4e6) + 0.2*(3e3*T + 3e6) = 3800 T - 2.6e6
    ///   T = 3.34e6 / 3800
    #[test]
    fn reference_adiabatic_temperature() {
        let (burnt, theta) = adiabatic_flame_temperature(&reference_unburnt(), &table()).unwrap();
        assert_eq!(burnt[F], 0.0);
        assert_eq!(burnt[O], 0.0);
        assert!((burnt[P] - 0.8).abs() < 1e-15);
        assert_eq!(burnt[N], 0.2);
        assert!((theta - 3.34e6 / 3800.0).abs() < 1e-9, "{theta}");
        assert!((theta - 878.947).abs() < 1e-3);
    }

    #[test]
    fn nothing_burns_without_fuel() {
        let u = MixtureSample::new([0.0, 0.7, 0.1, 0.2], 412.0).unwrap();
        let (burnt, theta) = adiabatic_flame_temperature(&u, &table()).unwrap();
        for (b, y) in burnt.iter().zip(u.y) {
            assert!((b - y).abs() < 1e-15);
        }
        assert!((theta - 412.0).abs() < 1e-10);
    }

    #[test]
    fn endothermic_failure_reported() {
        let t = SpeciesTable::new(
            [0.02; 4],
            [1.0, 1.0, 2.0],
            [1.0e3, 2.0e3, 4.0e3, 3.0e3],
            [0.0, 0.0, 1.0e8, 0.0],
            100.0,
        )
        .unwrap();
        assert!(adiabatic_flame_temperature(&reference_unburnt(), &t).is_err());
    }

    #[test]
    fn lean_mixture_keeps_oxidant() {
        let u = MixtureSample::new([0.1, 0.5, 0.0, 0.4], 300.0).unwrap();
        let (burnt, _) = adiabatic_flame_temperature(&u, &table()).unwrap();
        assert_eq!(burnt[F], 0.0);
        assert!((burnt[O] - 0.4).abs() < 1e-15);
        assert!((burnt[P] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn density_decreases_with_temperature() {
        let t = table();
        let y = [0.4, 0.4, 0.0, 0.2];
        let mut last = f64::INFINITY;
        for k in 1..200 {
            let theta = 10.0 * k as f64;
            let rho = eos_density(&MixtureSample { y, theta }, &t, 101325.0).unwrap();
            assert!(rho < last);
            last = rho;
        }
    }

    proptest! {
        #[test]
        fn z_round_trip(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let t = table();
            let (y_f, y_o) = (a * (1.0 - b), b);
            let back = y_o_from_z(reduced_z(y_f, y_o, &t), y_f, &t).unwrap();
            prop_assert!((back - y_o).abs() <= 1e-14);
        }

        #[test]
        fn z_in_unit_interval(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let t = table();
            let z = reduced_z(a * (1.0 - b), b, &t);
            prop_assert!((0.0..=1.0).contains(&z));
        }

        #[test]
        fn cp_is_convex_combination(w in proptest::array::uniform4(0.0f64..1.0)) {
            let total: f64 = w.iter().sum::<f64>() + 1e-12;
            let y = w.map(|v| v / total);
            let cp = mixture_cp(&y, &table());
            prop_assert!((1000.0 * (1.0 - 1e-12)..=4000.0 * (1.0 + 1e-12)).contains(&cp));
        }

        #[test]
        fn adiabatic_temperature_gauge_invariant(
            y_f in 0.01f64..0.5, y_o in 0.01f64..0.5, theta in 200.0f64..1000.0, shift in -1e7f64..1e7,
        ) {
            let t = table();
            let y = [y_f, y_o, 0.0, 1.0 - y_f - y_o];
            let u = MixtureSample { y, theta };
            let (_, a) = adiabatic_flame_temperature(&u, &t).unwrap();
            let (_, b) = adiabatic_flame_temperature(&u, &t.with_enthalpy_shift(shift)).unwrap();
            prop_assert!(((a - b) / a).abs() < 1e-9);
        }
    }
}
