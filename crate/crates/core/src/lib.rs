//! One-dimensional low-Mach-number solver for premixed dust-cloud flames.
//!
//! Two models share one fractional-step finite-volume scheme on a staggered
//! mesh:
//!
//! * the *primitive* model, with species, mass and enthalpy balances and an
//!   Arrhenius reaction rate;
//! * the *flame-velocity* model, which adds a transported color function `G`
//!   whose 1/2 level marks the flame brush and gates the reaction.
//!
//! Mass fractions stay in [0,1] and temperature and density stay positive at
//! every step. The [`diagnostics`] module measures the travelling wave
//! (front speed, plateau states, flame velocity from the jump conditions) and
//! compares profiles between runs.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod gfield;
pub mod io;
pub mod linalg;
pub mod mesh;
pub mod primitive;
pub mod run;
pub mod species;
pub mod state;
pub mod thermo;
pub mod transport;

pub use config::{Arrhenius, GConvection, GFieldParams, LeftBoundary, Model, SimulationConfig};
pub use error::{Error, Result};
pub use mesh::Mesh1D;
pub use primitive::Solver;
pub use species::SpeciesTable;
pub use state::{initial_state, FlowState};
