use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid or inconsistent configuration. `line` is 1-based when the
    /// problem comes from a config file.
    #[error("configuration error{}: {msg}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Config { line: Option<usize>, msg: String },

    #[error("domain error: {0}")]
    Domain(String),

    /// A value left its physical bounds by more than the rounding tolerance.
    #[error("consistency error in {field} at cell {cell}: value {value:e}")]
    Consistency {
        field: &'static str,
        cell: usize,
        value: f64,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("explicit convection CFL {cfl:.3} exceeds {limit}; reduce dt to at most {max_dt:e} s")]
    Cfl { cfl: f64, limit: f64, max_dt: f64 },

    #[error("step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("front not established: {0}")]
    FrontNotEstablished(String),

    #[error("wave not steady: {0}")]
    WaveNotSteady(String),

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config {
            line: None,
            msg: msg.into(),
        }
    }

    pub fn config_at(line: usize, msg: impl Into<String>) -> Self {
        Error::Config {
            line: Some(line),
            msg: msg.into(),
        }
    }

    pub(crate) fn at_step(self, step: usize) -> Self {
        match self {
            e @ Error::Step { .. } => e,
            e => Error::Step {
                step,
                source: Box::new(e),
            },
        }
    }

    /// Solver failures are the ones a caller cannot fix by editing the config.
    pub fn is_solver_failure(&self) -> bool {
        match self {
            Error::Step { source, .. } => source.is_solver_failure(),
            Error::Consistency { .. } | Error::Numerical(_) | Error::Cfl { .. } | Error::Domain(_) => true,
            _ => false,
        }
    }
}
