//! Fractional-step scheme for the balance equations: chemistry, energy,
//! equation of state, mass balance.
//!
//! Each step of a time level reuses the face mass fluxes of the previous mass
//! balance, pairing `rho^n y^{n+1}` with `rho^{n-1} y^n` in the time
//! derivative. This pairing makes every transport matrix an M-matrix and lets
//! uniform scalars pass through the convection operator unchanged.

use crate::config::{Arrhenius, ExternalState, GConvection, GFieldParams, LeftBoundary, Model, SimulationConfig};
use crate::error::{Error, Result};
use crate::linalg::Tridiagonal;
use crate::mesh::Mesh1D;
use crate::species::{Species, SpeciesTable, F, N, O, P};
use crate::state::FlowState;
use crate::thermo::{self, clip_fraction};
use crate::transport::{assemble_transport, assemble_weighted_transport, Inflow};

/// `omega = A y_F y_O exp(-T_a / theta)`.
#[inline]
pub fn arrhenius_rate(y_f: f64, y_o: f64, theta: f64, law: &Arrhenius) -> f64 {
    law.prefactor * y_f * y_o * (-law.activation_temperature / theta).exp()
}

/// Per-species mass production rates `(omega_F, omega_O, omega_P, omega_N)`.
pub fn species_reaction_rates(omega: f64, species: &SpeciesTable) -> [f64; 4] {
    let mut out = [0.0; 4];
    out[F] = -species.mass_per_mole(Species::Fuel) * omega;
    out[O] = -species.mass_per_mole(Species::Oxidant) * omega;
    // nu_P W_P = nu_F W_F + nu_O W_O
    out[P] = -(out[F] + out[O]);
    out
}

/// Reaction closure feeding the chemistry step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReactionClosure {
    Arrhenius(Arrhenius),
    /// Flame-velocity closure gated by the color function.
    GGated(GFieldParams),
}

/// Buffers reused across time steps.
#[derive(Debug, Clone, Default)]
pub struct StepWorkspace {
    pub(crate) sys: Tridiagonal,
    /// Implicit fuel sink coefficient per cell (kg m⁻³ s⁻¹ per unit fraction).
    pub sink: Vec<f64>,
    /// Molar reaction rate of the last chemistry step.
    pub omega: Vec<f64>,
    /// Mass fractions before the last chemistry step.
    pub(crate) y_old: Vec<[f64; 4]>,
    pub(crate) solution: Vec<f64>,
    pub(crate) weight_new: Vec<f64>,
    pub(crate) weight_old: Vec<f64>,
}

/// Owns the mesh and the constants of one simulation and advances a
/// [`FlowState`] in place.
#[derive(Debug, Clone)]
pub struct Solver {
    pub mesh: Mesh1D,
    pub species: SpeciesTable,
    pub model: Model,
    pub dt: f64,
    pub p_th: f64,
    pub lambda: f64,
    pub closure: ReactionClosure,
    pub left: LeftBoundary,
    pub backflow: ExternalState,
    pub g_convection: GConvection,
    pub ws: StepWorkspace,
}

impl Solver {
    pub fn new(cfg: &SimulationConfig) -> Result<Self> {
        cfg.validate()?;
        let closure = match cfg.model {
            Model::Primitive => ReactionClosure::Arrhenius(cfg.arrhenius),
            Model::FlameVelocity => ReactionClosure::GGated(cfg.g_params()?),
        };
        Ok(Self {
            mesh: cfg.mesh()?,
            species: cfg.species.clone(),
            model: cfg.model,
            dt: cfg.dt,
            p_th: cfg.p_th,
            lambda: cfg.lambda,
            closure,
            left: cfg.left_boundary,
            backflow: cfg.backflow_state(),
            g_convection: cfg.g_convection,
            ws: StepWorkspace::default(),
        })
    }

    /// Advance one time level with the configured model.
    pub fn advance(&mut self, state: &mut FlowState) -> Result<()> {
        match self.model {
            Model::Primitive => self.advance_primitive(state),
            Model::FlameVelocity => self.advance_gfield(state),
        }
    }

    /// Change the time step, re-pairing the previous density so the discrete
    /// mass balance holds for the new step.
    pub fn set_dt(&mut self, state: &mut FlowState, dt: f64) {
        state.rescale_time_step(dt / self.dt);
        self.dt = dt;
    }

    pub fn advance_primitive(&mut self, state: &mut FlowState) -> Result<()> {
        let step = state.step;
        self.reaction_steps(state).map_err(|e| e.at_step(step))
    }

    /// Chemistry, energy, equation of state and mass balance, in that order.
    pub(crate) fn reaction_steps(&mut self, state: &mut FlowState) -> Result<()> {
        self.chemistry_step(state)?;
        self.energy_step(state)?;
        self.eos_step(state)?;
        self.mass_step(state)?;
        state.t += self.dt;
        state.step += 1;
        state.check_invariants()
    }

    fn inflow_values(&self, f: impl Fn(&ExternalState) -> f64) -> Inflow {
        let left = match &self.left {
            LeftBoundary::Wall => 0.0,
            LeftBoundary::Inflow { state, .. } => f(state),
        };
        Inflow {
            left,
            right: f(&self.backflow),
        }
    }

    fn solve_transported(&mut self, state: &FlowState, q_old: &[f64], inflow: Inflow) -> Result<()> {
        let ws = &mut self.ws;
        assemble_transport(
            &mut ws.sys,
            &self.mesh,
            &state.rho,
            &state.rho_prev,
            &state.flux,
            self.dt,
            q_old,
            inflow,
        );
        ws.solution.resize(q_old.len(), 0.0);
        ws.sys.solve_into(&mut ws.solution)
    }

    /// Per-cell implicit sink coefficient `k` such that
    /// `omega_F = -k * (limiting reactant)^{n+1}`, evaluated from the old
    /// composition and temperature (and the new `G` for the gated closure).
    fn sink_coefficient(&self, y: &[f64; 4], theta: f64, g: Option<f64>, fuel_limited: bool) -> f64 {
        let s = self.species.mass_ratio();
        match self.closure {
            ReactionClosure::Arrhenius(law) => {
                let arr = law.prefactor * (-law.activation_temperature / theta).exp();
                let frozen = if fuel_limited { y[O] } else { s * y[F] };
                self.species.mass_per_mole(Species::Fuel) * arr * frozen
            }
            ReactionClosure::GGated(p) => {
                let gate = (0.5 - g.unwrap_or(1.0)).max(0.0);
                p.u_f / p.delta * gate
            }
        }
    }

    /// Solve for `(y_N, z, y_F)^{n+1}`, deduce `y_O` from `z` and close with
    /// `y_P = 1 - y_F - y_O - y_N`.
    ///
    /// The reaction sink is implicit in the limiting reactant and frozen in the
    /// other one. Writing `y_O = s (y_F + d)` with `d` known once `z^{n+1}` is
    /// solved, a fuel-limited cell (`d >= 0`) uses `-k y_F` and an
    /// oxidant-limited cell uses `-k (y_F + d)`; both keep the fuel and the
    /// oxidant systems monotone.
    pub fn chemistry_step(&mut self, state: &mut FlowState) -> Result<()> {
        let n = state.n_cells();
        let s = self.species.mass_ratio();
        self.ws.y_old.clone_from(&state.y);

        let y_n_old = state.fraction(N);
        let inflow = self.inflow_values(|e| e.y[N]);
        self.solve_transported(state, &y_n_old, inflow)?;
        for k in 0..n {
            state.y[k][N] = clip_fraction(self.ws.solution[k], "yN", k)?;
        }

        let z_old = state.z.clone();
        let species = &self.species;
        let inflow = self.inflow_values(|e| thermo::reduced_z(e.y[F], e.y[O], species));
        self.solve_transported(state, &z_old, inflow)?;
        for k in 0..n {
            state.z[k] = clip_fraction(self.ws.solution[k], "z", k)?;
        }

        // Oxidant excess over stoichiometry, in fuel-mass units.
        let excess: Vec<f64> = state.z.iter().map(|&z| (1.0 - (1.0 + s) * z) / s).collect();
        let mut sink = std::mem::take(&mut self.ws.sink);
        sink.clear();
        for k in 0..n {
            let g = state.g.as_ref().map(|g| g[k]);
            sink.push(self.sink_coefficient(&self.ws.y_old[k], state.theta[k], g, excess[k] >= 0.0));
        }

        let y_f_old = state.fraction(F);
        let inflow = self.inflow_values(|e| e.y[F]);
        let ws = &mut self.ws;
        assemble_transport(
            &mut ws.sys,
            &self.mesh,
            &state.rho,
            &state.rho_prev,
            &state.flux,
            self.dt,
            &y_f_old,
            inflow,
        );
        for k in 0..n {
            ws.sys.diag[k] += sink[k];
            if excess[k] < 0.0 {
                ws.sys.rhs[k] -= sink[k] * excess[k];
            }
        }
        ws.solution.resize(n, 0.0);
        ws.sys.solve_into(&mut ws.solution)?;

        let fuel_moles = self.species.mass_per_mole(Species::Fuel);
        ws.omega.clear();
        for k in 0..n {
            let y_f = clip_fraction(ws.solution[k], "yF", k)?;
            let y_o = thermo::y_o_from_z(state.z[k], y_f, &self.species).map_err(|_| Error::Consistency {
                field: "yO",
                cell: k,
                value: 1.0 + s * y_f - (1.0 + s) * state.z[k],
            })?;
            let y_nk = state.y[k][N];
            let y_p = clip_fraction(1.0 - y_f - y_o - y_nk, "yP", k)?;
            state.y[k] = [y_f, y_o, y_p, y_nk];
            let limiting = if excess[k] >= 0.0 {
                y_f
            } else {
                (y_f + excess[k]).max(0.0)
            };
            ws.omega.push(sink[k] * limiting / fuel_moles);
        }
        self.ws.sink = sink;
        Ok(())
    }

    /// Solve the enthalpy balance for `theta^{n+1}`. Must follow
    /// [`Solver::chemistry_step`], whose rates and old composition it uses.
    pub fn energy_step(&mut self, state: &mut FlowState) -> Result<()> {
        let n = state.n_cells();
        if self.ws.y_old.len() != n || self.ws.omega.len() != n {
            return Err(Error::Numerical("energy step called before chemistry step".into()));
        }
        let species = &self.species;
        let ws = &mut self.ws;
        ws.weight_new.clear();
        ws.weight_new
            .extend(state.y.iter().map(|y| thermo::mixture_cp(y, species)));
        ws.weight_old.clear();
        ws.weight_old
            .extend(ws.y_old.iter().map(|y| thermo::mixture_cp(y, species)));
        let enthalpy_in = |e: &ExternalState| thermo::mixture_cp(&e.y, species) * e.theta;
        let inflow = Inflow {
            left: match &self.left {
                LeftBoundary::Wall => 0.0,
                LeftBoundary::Inflow { state, .. } => enthalpy_in(state),
            },
            right: enthalpy_in(&self.backflow),
        };
        assemble_weighted_transport(
            &mut ws.sys,
            &self.mesh,
            &state.rho,
            &state.rho_prev,
            &state.flux,
            self.dt,
            &ws.weight_new,
            &ws.weight_old,
            &state.theta,
            inflow,
        );
        for face in 1..n {
            let a = self.lambda / self.mesh.center_distance(face);
            let (l, r) = (face - 1, face);
            let (al, ar) = (a / self.mesh.width(l), a / self.mesh.width(r));
            ws.sys.diag[l] += al;
            ws.sys.upper[l] -= al;
            ws.sys.diag[r] += ar;
            ws.sys.lower[r] -= ar;
        }
        let heat = self.species.heat_of_reaction();
        for k in 0..n {
            ws.sys.rhs[k] += heat * ws.omega[k];
        }
        ws.solution.resize(n, 0.0);
        ws.sys.solve_into(&mut ws.solution)?;
        for (k, &t) in ws.solution.iter().enumerate() {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Consistency {
                    field: "theta",
                    cell: k,
                    value: t,
                });
            }
        }
        state.theta.copy_from_slice(&ws.solution);
        Ok(())
    }

    /// `rho^{n+1} = rho(theta^{n+1}, y^{n+1})`; the old density moves to `rho_prev`.
    pub fn eos_step(&mut self, state: &mut FlowState) -> Result<()> {
        std::mem::swap(&mut state.rho, &mut state.rho_prev);
        for k in 0..state.n_cells() {
            let v = thermo::specific_volume(&state.y[k], state.theta[k], &self.species, self.p_th);
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Consistency {
                    field: "rho",
                    cell: k,
                    value: 1.0 / v,
                });
            }
            state.rho[k] = 1.0 / v;
        }
        Ok(())
    }

    /// March the mass balance from the left boundary to get the face fluxes,
    /// then divide by the upwind face density.
    pub fn mass_step(&mut self, state: &mut FlowState) -> Result<()> {
        let n = state.n_cells();
        let (f0, rho_in) = match &self.left {
            LeftBoundary::Wall => (0.0, None),
            LeftBoundary::Inflow { mass_flux, state: ext } => {
                let rho = thermo::eos_density(
                    &thermo::MixtureSample {
                        y: ext.y,
                        theta: ext.theta,
                    },
                    &self.species,
                    self.p_th,
                )?;
                (*mass_flux, Some(rho))
            }
        };
        state.flux[0] = f0;
        for k in 0..n {
            let h = self.mesh.width(k);
            state.flux[k + 1] = state.flux[k] - h * (state.rho[k] - state.rho_prev[k]) / self.dt;
        }
        for face in 0..=n {
            let f = state.flux[face];
            let (l, r) = self.mesh.face_cells(face);
            let rho_l = l.map(|c| state.rho[c]).or(rho_in);
            let rho_r = r.map(|c| state.rho[c]);
            let rho_face = match (f.partial_cmp(&0.0), rho_l, rho_r) {
                (Some(std::cmp::Ordering::Greater), Some(a), _) => a,
                (Some(std::cmp::Ordering::Less), _, Some(b)) => b,
                (_, Some(a), Some(b)) => 0.5 * (a + b),
                (_, Some(a), None) | (_, None, Some(a)) => a,
                _ => return Err(Error::Numerical(format!("no density at face {face}"))),
            };
            if !(rho_face > 0.0) {
                return Err(Error::Numerical(format!("zero face density at face {face}")));
            }
            state.u[face] = f / rho_face;
        }
        Ok(())
    }
}
