//! Implicit first-order upwind convection on the staggered mesh.
//!
//! For a transported quantity `q` the cell operator is
//! `(1/h_K) (F_R q_R - F_L q_L)` where each face value is taken from the cell
//! upstream of the face mass flux. Combined with the time term
//! `rho^n_K q_K / dt` the row is an M-matrix row whenever the fluxes satisfy
//! the discrete mass balance of the previous step: the excess of the diagonal
//! over the off-diagonal magnitudes is exactly `rho^{n-1}_K / dt`.

use crate::linalg::Tridiagonal;
use crate::mesh::Mesh1D;

/// Coefficients contributed by the convection term to one row. `left_ext` and
/// `right_ext` multiply the boundary values entering through the domain ends.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ConvectionRow {
    pub lower: f64,
    pub diag: f64,
    pub upper: f64,
    pub left_ext: f64,
    pub right_ext: f64,
}

pub fn upwind_convection_row(mesh: &Mesh1D, flux: &[f64], cell: usize) -> ConvectionRow {
    let n = mesh.n_cells();
    let inv_h = 1.0 / mesh.width(cell);
    let (f_left, f_right) = (flux[cell], flux[cell + 1]);
    let mut row = ConvectionRow::default();

    if f_right >= 0.0 {
        row.diag += f_right * inv_h;
    } else if cell + 1 < n {
        row.upper += f_right * inv_h;
    } else {
        row.right_ext += f_right * inv_h;
    }

    if f_left <= 0.0 {
        row.diag -= f_left * inv_h;
    } else if cell > 0 {
        row.lower -= f_left * inv_h;
    } else {
        row.left_ext -= f_left * inv_h;
    }
    row
}

/// Boundary values of a transported quantity, used only where the flux enters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inflow {
    pub left: f64,
    pub right: f64,
}

/// Assemble `rho^n w^{n+1} q/dt + div(F w q) = rho^{n-1} w^n q^n / dt` into
/// `sys`, where `w` is a per-cell weight on the unknown (1 for mass fractions,
/// the mixture heat capacity for the temperature). Source terms are added by
/// the caller.
#[allow(clippy::too_many_arguments)]
pub fn assemble_weighted_transport(
    sys: &mut Tridiagonal,
    mesh: &Mesh1D,
    rho: &[f64],
    rho_prev: &[f64],
    flux: &[f64],
    dt: f64,
    weight_new: &[f64],
    weight_old: &[f64],
    q_old: &[f64],
    inflow: Inflow,
) {
    let n = mesh.n_cells();
    sys.reset(n);
    for k in 0..n {
        let row = upwind_convection_row(mesh, flux, k);
        sys.diag[k] = rho[k] * weight_new[k] / dt + row.diag * weight_new[k];
        if k > 0 {
            sys.lower[k] = row.lower * weight_new[k - 1];
        }
        if k + 1 < n {
            sys.upper[k] = row.upper * weight_new[k + 1];
        }
        sys.rhs[k] =
            rho_prev[k] * weight_old[k] * q_old[k] / dt - row.left_ext * inflow.left - row.right_ext * inflow.right;
    }
}

/// Unweighted variant for mass fractions and other passive scalars.
#[allow(clippy::too_many_arguments)]
pub fn assemble_transport(
    sys: &mut Tridiagonal,
    mesh: &Mesh1D,
    rho: &[f64],
    rho_prev: &[f64],
    flux: &[f64],
    dt: f64,
    q_old: &[f64],
    inflow: Inflow,
) {
    let ones = vec![1.0; mesh.n_cells()];
    assemble_weighted_transport(sys, mesh, rho, rho_prev, flux, dt, &ones, &ones, q_old, inflow);
}
