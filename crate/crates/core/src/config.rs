//! Simulation configuration and its validation.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::Mesh1D;
use crate::species::SpeciesTable;
use crate::thermo::{self, MixtureSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Model {
    /// Species, mass and enthalpy balances with an Arrhenius reaction rate.
    Primitive,
    /// Same balances plus a transported color function `G` that gates the reaction.
    FlameVelocity,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Primitive => "primitive",
            Model::FlameVelocity => "flame-velocity",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primitive" => Ok(Model::Primitive),
            "flame-velocity" => Ok(Model::FlameVelocity),
            other => Err(Error::config(format!(
                "unknown model `{other}` (expected `primitive` or `flame-velocity`)"
            ))),
        }
    }
}

/// `omega = A y_F y_O exp(-T_a / theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arrhenius {
    pub prefactor: f64,
    pub activation_temperature: f64,
}

impl Default for Arrhenius {
    fn default() -> Self {
        Self {
            prefactor: 1.0e4,
            activation_temperature: 900.0,
        }
    }
}

/// Closure parameters of the flame-velocity model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GFieldParams {
    /// Flame brush velocity relative to the fresh gas (m/s).
    pub u_f: f64,
    /// Reaction-zone length scale (m).
    pub delta: f64,
    /// Characteristic unburnt density (kg/m³).
    pub rho_u: f64,
}

impl GFieldParams {
    pub fn new(u_f: f64, delta: f64, rho_u: f64) -> Result<Self> {
        if !(u_f >= 0.0 && u_f.is_finite()) {
            return Err(Error::config(format!("u_f must be >= 0, got {u_f}")));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::config(format!("delta must be > 0, got {delta}")));
        }
        if !(rho_u > 0.0 && rho_u.is_finite()) {
            return Err(Error::config(format!("rho_u must be > 0, got {rho_u}")));
        }
        Ok(Self { u_f, delta, rho_u })
    }
}

/// Discretization of the material convection of `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum GConvection {
    /// Explicit second-order upwind with minmod-limited slopes.
    #[default]
    Muscl,
    /// Same implicit first-order upwind operator as the species balances.
    ImplicitUpwind,
}

/// Scalar values carried into the domain by an entering mass flux.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExternalState {
    pub y: [f64; 4],
    pub theta: f64,
    pub g: f64,
}

/// Left boundary of the domain. The right boundary is always an outlet.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum LeftBoundary {
    /// Closed symmetry plane: no mass, species or heat flux.
    #[default]
    Wall,
    /// Prescribed entering mass flux (kg m⁻² s⁻¹, > 0) with Dirichlet scalars
    /// and a total-enthalpy flux `F c_p theta_in`.
    Inflow { mass_flux: f64, state: ExternalState },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub preset: Option<String>,
    pub model: Model,
    pub x_left: f64,
    pub x_right: f64,
    pub n_cells: usize,
    pub dt: f64,
    pub t_end: f64,
    /// Thermodynamic pressure (Pa).
    pub p_th: f64,
    /// Thermal conductivity (W m⁻¹ K⁻¹).
    pub lambda: f64,
    /// Initial mass fractions in the order F, O, P, N.
    pub y0: [f64; 4],
    pub theta0: f64,
    /// Number of cells at the left wall where the flame is started.
    pub ignition_cells: usize,
    /// Initial temperature of the ignition cells (primitive model).
    pub ignition_theta: f64,
    pub arrhenius: Arrhenius,
    pub u_f: Option<f64>,
    pub delta: Option<f64>,
    /// Defaults to the initial fresh-gas density.
    pub rho_u: Option<f64>,
    pub snapshot_every: usize,
    pub out_dir: PathBuf,
    pub species: SpeciesTable,
    pub g_convection: GConvection,
    pub left_boundary: LeftBoundary,
}

pub const DEFAULT_P_TH: f64 = 101_325.0;

impl SimulationConfig {
    /// Reference dust-flame configuration: stoichiometric mixture at rest,
    /// ignited at the closed left end of a 0.1 m tube.
    pub fn reference() -> Self {
        Self {
            preset: Some("paper-sec4".into()),
            model: Model::Primitive,
            x_left: 0.0,
            x_right: 0.1,
            n_cells: 2048,
            dt: 2.0e-4,
            t_end: 1.0,
            p_th: DEFAULT_P_TH,
            lambda: 0.005,
            y0: [0.4, 0.4, 0.0, 0.2],
            theta0: 300.0,
            ignition_cells: 2,
            ignition_theta: 1500.0,
            arrhenius: Arrhenius::default(),
            u_f: None,
            delta: None,
            rho_u: None,
            snapshot_every: 100,
            out_dir: PathBuf::from("out"),
            species: SpeciesTable::reference(),
            g_convection: GConvection::Muscl,
            left_boundary: LeftBoundary::Wall,
        }
    }

    pub fn validate(&self) -> Result<()> {
        Mesh1D::uniform(self.x_left, self.x_right, self.n_cells)?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::config(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::config(format!("t_end must be >= 0, got {}", self.t_end)));
        }
        if !(self.p_th > 0.0 && self.p_th.is_finite()) {
            return Err(Error::config(format!("P_th must be > 0, got {}", self.p_th)));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::config(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        validate_fractions(&self.y0)?;
        if !(self.theta0 > 0.0 && self.theta0.is_finite()) {
            return Err(Error::config(format!("theta0 must be > 0, got {}", self.theta0)));
        }
        if !(self.ignition_theta > 0.0 && self.ignition_theta.is_finite()) {
            return Err(Error::config("ignition_theta must be > 0"));
        }
        if self.ignition_cells >= self.n_cells {
            return Err(Error::config("ignition zone covers the whole domain"));
        }
        let a = self.arrhenius;
        if !(a.prefactor >= 0.0 && a.prefactor.is_finite() && a.activation_temperature.is_finite()) {
            return Err(Error::config("Arrhenius prefactor must be >= 0 and finite"));
        }
        if self.snapshot_every == 0 {
            return Err(Error::config("snapshot_every must be >= 1"));
        }
        if let Some(r) = self.rho_u {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::config("rho_u must be > 0"));
            }
        }
        if self.model == Model::FlameVelocity {
            self.g_params()?;
        }
        if let LeftBoundary::Inflow { mass_flux, state } = self.left_boundary {
            if !(mass_flux > 0.0 && mass_flux.is_finite()) {
                return Err(Error::config("inflow mass flux must be > 0"));
            }
            validate_fractions(&state.y)?;
            if !(state.theta > 0.0) || !(0.0..=1.0).contains(&state.g) {
                return Err(Error::config("invalid inflow state"));
            }
        }
        Ok(())
    }

    pub fn mesh(&self) -> Result<Mesh1D> {
        Mesh1D::uniform(self.x_left, self.x_right, self.n_cells)
    }

    pub fn unburnt_sample(&self) -> Result<MixtureSample> {
        MixtureSample::new(self.y0, self.theta0)
    }

    pub fn initial_density(&self) -> Result<f64> {
        thermo::eos_density(&self.unburnt_sample()?, &self.species, self.p_th)
    }

    /// Closure parameters of the flame-velocity model; `rho_u` falls back to
    /// the initial fresh-gas density.
    pub fn g_params(&self) -> Result<GFieldParams> {
        let u_f = self
            .u_f
            .ok_or_else(|| Error::config("flame-velocity model requires `u_f`"))?;
        let delta = self
            .delta
            .ok_or_else(|| Error::config("flame-velocity model requires `delta`"))?;
        let rho_u = match self.rho_u {
            Some(r) => r,
            None => self.initial_density()?,
        };
        GFieldParams::new(u_f, delta, rho_u)
    }

    /// Values entering through the outlet if the flow ever reverses there.
    pub fn backflow_state(&self) -> ExternalState {
        ExternalState {
            y: self.y0,
            theta: self.theta0,
            g: 1.0,
        }
    }

    pub fn n_steps(&self) -> usize {
        (self.t_end / self.dt - 1e-9).ceil().max(0.0) as usize
    }
}

fn validate_fractions(y: &[f64; 4]) -> Result<()> {
    if y.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::config(format!("mass fractions must lie in [0,1]: {y:?}")));
    }
    let sum: f64 = y.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::config(format!("mass fractions sum to {sum}, expected 1")));
    }
    Ok(())
}
