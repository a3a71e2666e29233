//! One time level of the discrete unknowns.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{Model, SimulationConfig};
use crate::error::{Error, Result};
use crate::mesh::Mesh1D;
use crate::species::{SpeciesTable, F, O};
use crate::thermo;

/// Discrete unknowns at `t = t_n`.
///
/// `rho_prev` and `flux` belong to the time-shifted pairing of the scheme:
/// together with `rho` they satisfy the discrete mass balance
/// `h_K (rho - rho_prev)_K / dt + flux[K+1] - flux[K] = 0` in every cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub t: f64,
    pub step: usize,
    pub rho: Vec<f64>,
    pub rho_prev: Vec<f64>,
    /// Mass fractions F, O, P, N per cell.
    pub y: Vec<[f64; 4]>,
    pub z: Vec<f64>,
    pub theta: Vec<f64>,
    /// Face velocities.
    pub u: Vec<f64>,
    /// Face mass fluxes `rho_sigma u_sigma`.
    pub flux: Vec<f64>,
    /// Color function, flame-velocity model only.
    pub g: Option<Vec<f64>>,
}

impl FlowState {
    pub fn n_cells(&self) -> usize {
        self.rho.len()
    }

    /// Mass fraction of one species in every cell.
    pub fn fraction(&self, species: usize) -> Vec<f64> {
        self.y.iter().map(|y| y[species]).collect()
    }

    /// Face velocities averaged to cell centers.
    pub fn cell_velocity(&self) -> Vec<f64> {
        self.u.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Check every physical bound. Mass fractions must sum to one within 1e-12.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n_cells();
        if self.rho_prev.len() != n
            || self.y.len() != n
            || self.z.len() != n
            || self.theta.len() != n
            || self.u.len() != n + 1
            || self.flux.len() != n + 1
            || self.g.as_ref().is_some_and(|g| g.len() != n)
        {
            return Err(Error::Numerical("state arrays have inconsistent lengths".into()));
        }
        for k in 0..n {
            for (i, &v) in self.y[k].iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::Consistency {
                        field: ["yF", "yO", "yP", "yN"][i],
                        cell: k,
                        value: v,
                    });
                }
            }
            let sum: f64 = self.y[k].iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::Consistency {
                    field: "sum(y)",
                    cell: k,
                    value: sum,
                });
            }
            if !(0.0..=1.0).contains(&self.z[k]) {
                return Err(Error::Consistency {
                    field: "z",
                    cell: k,
                    value: self.z[k],
                });
            }
            for (field, v) in [
                ("theta", self.theta[k]),
                ("rho", self.rho[k]),
                ("rho_prev", self.rho_prev[k]),
            ] {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::Consistency {
                        field,
                        cell: k,
                        value: v,
                    });
                }
            }
            if let Some(g) = &self.g {
                if !(0.0..=1.0).contains(&g[k]) {
                    return Err(Error::Consistency {
                        field: "G",
                        cell: k,
                        value: g[k],
                    });
                }
            }
        }
        if self.u.iter().chain(&self.flux).any(|v| !v.is_finite()) {
            return Err(Error::Numerical("non-finite face velocity".into()));
        }
        Ok(())
    }

    /// Per-cell residual of the discrete mass balance linking `rho_prev`,
    /// `rho` and `flux`, relative to `h_K rho_K / dt`.
    pub fn mass_balance_residual(&self, mesh: &Mesh1D, dt: f64) -> Vec<f64> {
        (0..self.n_cells())
            .map(|k| {
                let h = mesh.width(k);
                let r = h * (self.rho[k] - self.rho_prev[k]) / dt + self.flux[k + 1] - self.flux[k];
                r.abs() / (h * self.rho[k] / dt)
            })
            .collect()
    }

    /// Re-pair the previous density with a new time step so that the mass
    /// balance still holds for `dt_new = ratio * dt_old` (`0 < ratio <= 1`).
    pub fn rescale_time_step(&mut self, ratio: f64) {
        for (prev, &cur) in self.rho_prev.iter_mut().zip(&self.rho) {
            *prev = cur + ratio * (*prev - cur);
        }
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(self).map_err(|e| Error::Format {
            path: path.to_owned(),
            msg: e.to_string(),
        })?;
        fs::write(path, text)?;
        Ok(())
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Format {
            path: path.to_owned(),
            msg: e.to_string(),
        })
    }
}

/// Fluid at rest with uniform composition; the first `ignition_cells` cells
/// start the flame (raised temperature for the primitive model, `G = 0` for
/// the flame-velocity model).
pub fn initial_state(cfg: &SimulationConfig, species: &SpeciesTable, mesh: &Mesh1D) -> Result<FlowState> {
    let sum: f64 = cfg.y0.iter().sum();
    if (sum - 1.0).abs() > 1e-12 || cfg.y0.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::config(format!(
            "initial mass fractions {:?} do not sum to 1",
            cfg.y0
        )));
    }
    if !(cfg.theta0 > 0.0) {
        return Err(Error::config("theta0 must be > 0"));
    }
    let n = mesh.n_cells();
    let ignition = cfg.ignition_cells.min(n);
    let theta: Vec<f64> = (0..n)
        .map(|k| {
            if cfg.model == Model::Primitive && k < ignition {
                cfg.ignition_theta
            } else {
                cfg.theta0
            }
        })
        .collect();
    let rho = theta
        .iter()
        .map(|&t| thermo::eos_density(&thermo::MixtureSample { y: cfg.y0, theta: t }, species, cfg.p_th))
        .collect::<Result<Vec<_>>>()?;
    let z = thermo::reduced_z(cfg.y0[F], cfg.y0[O], species).clamp(0.0, 1.0);
    let g = (cfg.model == Model::FlameVelocity).then(|| (0..n).map(|k| if k < ignition { 0.0 } else { 1.0 }).collect());
    Ok(FlowState {
        t: 0.0,
        step: 0,
        rho_prev: rho.clone(),
        rho,
        y: vec![cfg.y0; n],
        z: vec![z; n],
        theta,
        u: vec![0.0; n + 1],
        flux: vec![0.0; n + 1],
        g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::species::GAS_CONSTANT;
    use proptest::prelude::*;

    fn small_cfg() -> SimulationConfig {
        let mut c = SimulationConfig::reference();
        c.n_cells = 16;
        c
    }

    #[test]
    fn reference_initial_state() {
        let cfg = small_cfg();
        let mesh = cfg.mesh().unwrap();
        let s = initial_state(&cfg, &cfg.species, &mesh).unwrap();
        s.check_invariants().unwrap();
        assert!(s.z.iter().all(|&z| (z - 0.5).abs() < 1e-15));
        assert!((s.rho[5] - 1.3467).abs() < 1e-4);
        assert_eq!(s.theta[0], 1500.0);
        assert_eq!(s.theta[2], 300.0);
        assert_eq!(s.rho, s.rho_prev);
        assert!(s.u.iter().all(|&u| u == 0.0));
        assert!(s.g.is_none());
    }

    #[test]
    fn flame_velocity_initial_color() {
        let mut cfg = small_cfg();
        cfg.model = Model::FlameVelocity;
        cfg.u_f = Some(0.01);
        cfg.delta = Some(1e-4);
        let mesh = cfg.mesh().unwrap();
        let s = initial_state(&cfg, &cfg.species, &mesh).unwrap();
        let g = s.g.as_ref().unwrap();
        assert_eq!(&g[..3], &[0.0, 0.0, 1.0]);
        assert!(s.theta.iter().all(|&t| t == 300.0));
    }

    #[test]
    fn neutral_gas_density() {
        let mut cfg = small_cfg();
        cfg.y0 = [0.0, 0.0, 0.0, 1.0];
        cfg.ignition_cells = 0;
        let mesh = cfg.mesh().unwrap();
        let s = initial_state(&cfg, &cfg.species, &mesh).unwrap();
        let expected = cfg.p_th * 0.02 / (GAS_CONSTANT * 300.0);
        assert!(s.rho.iter().all(|&r| (r - expected).abs() < 1e-15));
    }

    #[test]
    fn fractions_must_sum_to_one() {
        let mut cfg = small_cfg();
        cfg.y0 = [0.4, 0.3, 0.0, 0.2];
        let mesh = cfg.mesh().unwrap();
        assert!(initial_state(&cfg, &cfg.species, &mesh).is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let cfg = small_cfg();
        let mesh = cfg.mesh().unwrap();
        let mut s = initial_state(&cfg, &cfg.species, &mesh).unwrap();
        s.t = 0.1 + 0.2;
        s.u[3] = std::f64::consts::PI * 1e-7;
        s.g = Some(vec![1.0 / 3.0; 16]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.json");
        s.save_json(&path).unwrap();
        let back = FlowState::load_json(&path).unwrap();
        assert_eq!(s, back);
        assert_eq!(back.u[3].to_bits(), s.u[3].to_bits());
    }

    proptest! {
        #[test]
        fn initial_state_satisfies_invariants(
            w in proptest::array::uniform4(0.0f64..1.0),
            theta0 in 150.0f64..2000.0,
            n_cells in 3usize..64,
            ignition in 0usize..3,
            flame_velocity in proptest::bool::ANY,
        ) {
            let total: f64 = w.iter().sum::<f64>() + 1e-9;
            let mut y = w.map(|v| v / total);
            y[3] = 1.0 - y[0] - y[1] - y[2];
            prop_assume!(y[3] >= 0.0);
            let mut cfg = SimulationConfig::reference();
            cfg.n_cells = n_cells;
            cfg.y0 = y;
            cfg.theta0 = theta0;
            cfg.ignition_cells = ignition;
            if flame_velocity {
                cfg.model = Model::FlameVelocity;
                cfg.u_f = Some(0.02);
                cfg.delta = Some(1e-4);
            }
            let mesh = cfg.mesh().unwrap();
            let s = initial_state(&cfg, &cfg.species, &mesh).unwrap();
            prop_assert!(s.check_invariants().is_ok());
            prop_assert!(s.mass_balance_residual(&mesh, cfg.dt).iter().all(|&r| r == 0.0));
        }
    }
}
