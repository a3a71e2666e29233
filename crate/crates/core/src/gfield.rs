//! Flame-velocity model: transport of the color function `G` and the
//! `G`-gated reaction rate.
//!
//! The propagation term `rho_u u_f |grad G|` is written `N . grad G` with `N`
//! the sign of the discrete gradient of the old `G`, then
//! `N . grad G = div(G N) - G div N` is discretized with implicit upwinding in
//! `N`. Material convection of `G` is explicit MUSCL with minmod slopes (or,
//! optionally, the implicit upwind operator of the species balances).

use crate::config::{GConvection, GFieldParams};
use crate::error::{Error, Result};
use crate::linalg::Tridiagonal;
use crate::mesh::Mesh1D;
use crate::primitive::Solver;
use crate::species::{Species, SpeciesTable};
use crate::state::FlowState;
use crate::thermo::clip_fraction;
use crate::transport::{assemble_transport, Inflow};

/// Magnitude below which a face difference of `G` counts as flat.
pub const NORMAL_DEAD_ZONE: f64 = 1e-14;

/// Largest explicit-convection Courant number accepted by the MUSCL step.
pub const MUSCL_CFL_LIMIT: f64 = 1.0;

/// `omega = (u_f / delta) * min(y_F/(nu_F W_F), y_O/(nu_O W_O)) * (G - 1/2)^-`.
pub fn g_reaction_rate(g: f64, y_f: f64, y_o: f64, params: &GFieldParams, species: &SpeciesTable) -> f64 {
    let eta = (y_f / species.mass_per_mole(Species::Fuel)).min(y_o / species.mass_per_mole(Species::Oxidant));
    let gate = (0.5 - g).max(0.0);
    params.u_f / params.delta * eta * gate
}

/// Per-face sign of the old `G` gradient; boundary faces carry no propagation.
pub fn face_normals(g: &[f64]) -> Vec<f64> {
    let n = g.len();
    let mut normals = vec![0.0; n + 1];
    for face in 1..n {
        let diff = g[face] - g[face - 1];
        normals[face] = if diff > NORMAL_DEAD_ZONE {
            1.0
        } else if diff < -NORMAL_DEAD_ZONE {
            -1.0
        } else {
            0.0
        };
    }
    normals
}

/// Add `speed * (N . grad G)_K` to the rows of `sys`, `speed = rho_u u_f`.
///
/// Row `K` gains `speed/h_K * [(N_R^- + N_L^+) G_K - N_R^- G_{K+1} - N_L^+ G_{K-1}]`,
/// which has zero row sum and nonpositive off-diagonals.
pub fn add_propagation(sys: &mut Tridiagonal, mesh: &Mesh1D, normals: &[f64], speed: f64) {
    let n = mesh.n_cells();
    for k in 0..n {
        let c = speed / mesh.width(k);
        let backward = normals[k].max(0.0);
        let forward = (-normals[k + 1]).max(0.0);
        sys.diag[k] += c * (backward + forward);
        if k > 0 {
            sys.lower[k] -= c * backward;
        }
        if k + 1 < n {
            sys.upper[k] -= c * forward;
        }
    }
}

#[inline]
fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Largest `dt * (|F_L| + |F_R|) / (h_K rho^n_K)` over the cells.
pub fn explicit_cfl(mesh: &Mesh1D, rho: &[f64], flux: &[f64], dt: f64) -> f64 {
    (0..mesh.n_cells())
        .map(|k| dt * (flux[k].abs() + flux[k + 1].abs()) / (mesh.width(k) * rho[k]))
        .fold(0.0, f64::max)
}

/// Explicit MUSCL convection of `G`:
/// `rho^n G* = rho^{n-1} G^n - dt/h (F_R G_R - F_L G_L)` with minmod-limited
/// upwind face reconstructions. Under the CFL bound the result is a local
/// convex combination of old values.
pub fn muscl_convect(
    mesh: &Mesh1D,
    rho: &[f64],
    rho_prev: &[f64],
    flux: &[f64],
    dt: f64,
    g: &[f64],
    inflow: Inflow,
) -> Result<Vec<f64>> {
    let n = mesh.n_cells();
    let cfl = explicit_cfl(mesh, rho, flux, dt);
    if cfl > MUSCL_CFL_LIMIT {
        return Err(Error::Cfl {
            cfl,
            limit: MUSCL_CFL_LIMIT,
            max_dt: dt * MUSCL_CFL_LIMIT / cfl,
        });
    }
    let slope: Vec<f64> = (0..n)
        .map(|k| {
            if k == 0 || k + 1 == n {
                0.0
            } else {
                minmod(g[k] - g[k - 1], g[k + 1] - g[k])
            }
        })
        .collect();
    let face_value = |face: usize| -> f64 {
        let f = flux[face];
        if f > 0.0 {
            if face == 0 {
                inflow.left
            } else {
                g[face - 1] + 0.5 * slope[face - 1]
            }
        } else if face == n {
            if f < 0.0 {
                inflow.right
            } else {
                g[n - 1]
            }
        } else {
            g[face] - 0.5 * slope[face]
        }
    };
    let face_flux: Vec<f64> = (0..=n).map(|j| flux[j] * face_value(j)).collect();
    Ok((0..n)
        .map(|k| (rho_prev[k] * g[k] - dt / mesh.width(k) * (face_flux[k + 1] - face_flux[k])) / rho[k])
        .collect())
}

impl Solver {
    fn g_params(&self) -> Result<GFieldParams> {
        match self.closure {
            crate::primitive::ReactionClosure::GGated(p) => Ok(p),
            _ => Err(Error::config("G transport needs flame-velocity closure parameters")),
        }
    }

    /// Solve the discrete `G`-equation for `G^{n+1}`. On a CFL refusal the
    /// state is left untouched.
    pub fn g_transport_step(&mut self, state: &mut FlowState) -> Result<()> {
        let params = self.g_params()?;
        let n = state.n_cells();
        let g_old = state
            .g
            .as_ref()
            .ok_or_else(|| Error::Numerical("state carries no G field".into()))?;
        let inflow = Inflow {
            left: match &self.left {
                crate::config::LeftBoundary::Wall => 0.0,
                crate::config::LeftBoundary::Inflow { state, .. } => state.g,
            },
            right: self.backflow.g,
        };
        let normals = face_normals(g_old);
        let sys = &mut self.ws.sys;
        match self.g_convection {
            GConvection::Muscl => {
                let convected = muscl_convect(
                    &self.mesh,
                    &state.rho,
                    &state.rho_prev,
                    &state.flux,
                    self.dt,
                    g_old,
                    inflow,
                )?;
                sys.reset(n);
                for (k, c) in convected.iter().enumerate() {
                    sys.diag[k] = state.rho[k] / self.dt;
                    sys.rhs[k] = state.rho[k] * c / self.dt;
                }
            }
            GConvection::ImplicitUpwind => {
                assemble_transport(
                    sys,
                    &self.mesh,
                    &state.rho,
                    &state.rho_prev,
                    &state.flux,
                    self.dt,
                    g_old,
                    inflow,
                );
            }
        }
        add_propagation(sys, &self.mesh, &normals, params.rho_u * params.u_f);
        let mut g_new = vec![0.0; n];
        sys.solve_into(&mut g_new)?;
        for (k, v) in g_new.iter_mut().enumerate() {
            *v = clip_fraction(*v, "G", k)?;
        }
        state.g = Some(g_new);
        Ok(())
    }

    /// `G` transport followed by the chemistry, energy, EOS and mass steps,
    /// the reaction being gated by `G^{n+1}`.
    pub fn advance_gfield(&mut self, state: &mut FlowState) -> Result<()> {
        let step = state.step;
        self.g_transport_step(state).map_err(|e| e.at_step(step))?;
        self.reaction_steps(state).map_err(|e| e.at_step(step))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Model, SimulationConfig};
    use crate::state::initial_state;

    fn gcfg(n: usize, u_f: f64) -> SimulationConfig {
        let mut c = SimulationConfig::reference();
        c.model = Model::FlameVelocity;
        c.n_cells = n;
        c.x_right = 0.01;
        c.dt = 1e-4;
        c.u_f = Some(u_f);
        c.delta = Some(1e-4);
        c
    }

    #[test]
    fn gated_rate_examples() {
        let t = SpeciesTable::reference();
        let p = GFieldParams::new(0.5, 1e-4, 1.0).unwrap();
        assert_eq!(g_reaction_rate(0.7, 0.4, 0.4, &p, &t), 0.0);
        assert_eq!(g_reaction_rate(0.5, 0.4, 0.4, &p, &t), 0.0);
        assert_eq!(g_reaction_rate(0.0, 0.0, 0.4, &p, &t), 0.0);
        // (0.5 / 1e-4) * min(20, 20) * 0.5
        let w = g_reaction_rate(0.0, 0.4, 0.4, &p, &t);
        assert!((w - 5.0e4).abs() < 1e-9, "{w}");
    }

    #[test]
    fn normals_follow_gradient_sign() {
        let n = face_normals(&[0.0, 0.0, 0.3, 1.0, 1.0, 0.2]);
        assert_eq!(n, vec![0.0, 0.0, 1.0, 1.0, 0.0, -1.0, 0.0]);
    }

    #[test]
    fn propagation_rows_sum_to_zero() {
        let mesh = Mesh1D::uniform(0.0, 1.0, 6).unwrap();
        let normals = face_normals(&[0.0, 0.1, 0.5, 0.9, 0.6, 0.6]);
        let mut sys = Tridiagonal::new(6);
        add_propagation(&mut sys, &mesh, &normals, 2.0);
        for k in 0..6 {
            assert!((sys.diag[k] + sys.lower[k] + sys.upper[k]).abs() < 1e-14);
            assert!(sys.lower[k] <= 0.0 && sys.upper[k] <= 0.0);
        }
        // cell 3 sees an increasing left face and a decreasing right face
        assert!((sys.diag[3] - 2.0 * 6.0 * 2.0).abs() < 1e-12);
    }

    #[test]
    fn no_transport_leaves_g_unchanged() {
        let c = gcfg(16, 0.0);
        let mut solver = Solver::new(&c).unwrap();
        let mut state = initial_state(&c, &c.species, &solver.mesh).unwrap();
        let before = state.g.clone();
        solver.g_transport_step(&mut state).unwrap();
        assert_eq!(state.g, before);
    }

    #[test]
    fn flat_field_unchanged() {
        let mut c = gcfg(16, 0.3);
        c.ignition_cells = 0;
        let mut solver = Solver::new(&c).unwrap();
        let mut state = initial_state(&c, &c.species, &solver.mesh).unwrap();
        solver.g_transport_step(&mut state).unwrap();
        assert!(state.g.as_ref().unwrap().iter().all(|&g| g == 1.0));
    }

    #[test]
    fn front_moves_towards_fresh_side() {
        let c = gcfg(32, 0.05);
        let mut solver = Solver::new(&c).unwrap();
        let mut state = initial_state(&c, &c.species, &solver.mesh).unwrap();
        solver.g_transport_step(&mut state).unwrap();
        let g = state.g.as_ref().unwrap();
        assert!(g[2] < 1.0);
        assert!(g.windows(2).all(|w| w[0] <= w[1]));
        assert!(g.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn cfl_violation_refused_without_mutation() {
        let c = gcfg(8, 0.0);
        let mut solver = Solver::new(&c).unwrap();
        let mut state = initial_state(&c, &c.species, &solver.mesh).unwrap();
        state.flux = vec![0.0, 100.0, 100.0, 100.0, 100.0, 100.0, 100.0, 100.0, 100.0];
        let before = state.clone();
        let err = solver.g_transport_step(&mut state).unwrap_err();
        assert!(matches!(err, Error::Cfl { .. }));
        assert_eq!(state, before);
    }

    #[test]
    fn muscl_is_bounded_on_rough_data() {
        let mesh = Mesh1D::uniform(0.0, 1.0, 10).unwrap();
        let dt = 0.005;
        let flux = vec![0.0, 2.0, 5.0, 3.0, -1.0, 4.0, 6.0, 6.0, 5.0, 5.5, 6.0];
        let rho_prev = vec![1.0; 10];
        let rho: Vec<f64> = (0..10)
            .map(|k| rho_prev[k] - dt / mesh.width(k) * (flux[k + 1] - flux[k]))
            .collect();
        let g = [0.0, 1.0, 0.2, 0.9, 0.9, 0.1, 0.5, 1.0, 0.0, 0.3];
        let out = muscl_convect(&mesh, &rho, &rho_prev, &flux, dt, &g, Inflow { left: 0.0, right: 1.0 }).unwrap();
        for v in out {
            assert!((-1e-14..=1.0 + 1e-14).contains(&v), "{v}");
        }
    }
}
