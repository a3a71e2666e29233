//! Orchestration: time loop with front tracking, run directories, profile
//! comparison between runs and flame-thickness sweeps.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::config::{Model, SimulationConfig};
use crate::diagnostics::{self, compare_profiles, Field, Profile, ProfileComparison, WaveAnalysis, WaveReport};
use crate::error::{Error, Result};
use crate::io::{self, RunManifest};
use crate::primitive::Solver;
use crate::state::{initial_state, FlowState};
use crate::thermo;

/// Front positions of one field at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontTrack {
    pub field: Field,
    pub level: f64,
    pub samples: Vec<(f64, f64)>,
}

impl FrontTrack {
    fn new(field: Field, level: f64) -> Self {
        Self {
            field,
            level,
            samples: Vec::new(),
        }
    }

    /// Record the front if it is established; ambiguous states are skipped.
    fn observe(&mut self, state: &FlowState, solver: &Solver) {
        if let Ok(p) = Profile::from_state(state, &solver.mesh, self.field) {
            if let Ok(x) = diagnostics::front_position(&p, self.level) {
                self.samples.push((state.t, x));
            }
        }
    }
}

/// Midpoint between the fresh and the adiabatic burnt temperature.
pub fn theta_front_level(cfg: &SimulationConfig) -> Result<f64> {
    let (_, theta_b) = thermo::adiabatic_flame_temperature(&cfg.unburnt_sample()?, &cfg.species)?;
    Ok(0.5 * (cfg.theta0 + theta_b))
}

/// A model advanced step by step with front tracking.
///
/// The temperature front is always tracked; the flame-velocity model also
/// tracks `G = 0.5`, which is then the primary trajectory.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub cfg: SimulationConfig,
    pub solver: Solver,
    pub state: FlowState,
    pub theta_track: FrontTrack,
    pub g_track: Option<FrontTrack>,
    /// State saved once `t` reaches 90% of `t_end`, for the steadiness check.
    pub earlier: Option<FlowState>,
    /// Number of time-step halvings forced by the convection CFL limit.
    pub dt_halvings: usize,
}

const MAX_DT_HALVINGS: usize = 20;

impl Simulation {
    pub fn new(cfg: &SimulationConfig) -> Result<Self> {
        let solver = Solver::new(cfg)?;
        let state = initial_state(cfg, &cfg.species, &solver.mesh)?;
        let theta_track = FrontTrack::new(Field::Theta, theta_front_level(cfg)?);
        let g_track = (cfg.model == Model::FlameVelocity).then(|| FrontTrack::new(Field::G, 0.5));
        Ok(Self {
            cfg: cfg.clone(),
            solver,
            state,
            theta_track,
            g_track,
            earlier: None,
            dt_halvings: 0,
        })
    }

    pub fn finished(&self) -> bool {
        self.state.t >= self.cfg.t_end - 1e-9 * self.solver.dt
    }

    /// Advance one time level, halving `dt` if the explicit convection of
    /// `G` refuses the current one.
    pub fn step(&mut self) -> Result<()> {
        loop {
            match self.solver.advance(&mut self.state) {
                Ok(()) => break,
                Err(Error::Step { source, step }) if matches!(*source, Error::Cfl { .. }) => {
                    if self.dt_halvings == MAX_DT_HALVINGS {
                        return Err(Error::Step { step, source });
                    }
                    self.dt_halvings += 1;
                    let dt = 0.5 * self.solver.dt;
                    self.solver.set_dt(&mut self.state, dt);
                }
                Err(e) => return Err(e),
            }
        }
        self.theta_track.observe(&self.state, &self.solver);
        if let Some(track) = &mut self.g_track {
            track.observe(&self.state, &self.solver);
        }
        if self.earlier.is_none() && self.state.t >= 0.9 * self.cfg.t_end - 1e-9 * self.solver.dt {
            self.earlier = Some(self.state.clone());
        }
        Ok(())
    }

    pub fn run_to_end(&mut self) -> Result<()> {
        while !self.finished() {
            self.step()?;
        }
        Ok(())
    }

    /// Primary trajectory: `G` for the flame-velocity model, `theta` otherwise.
    pub fn primary_track(&self) -> &FrontTrack {
        self.g_track.as_ref().unwrap_or(&self.theta_track)
    }

    pub fn report(&self) -> WaveReport {
        let track = self.primary_track();
        let Some(earlier) = &self.earlier else {
            return WaveReport::not_steady(track.field, track.level, track.samples.clone(), "run too short");
        };
        let analysis = WaveAnalysis::for_domain(self.cfg.x_right - self.cfg.x_left);
        let mut report = analysis.analyze(
            track.field,
            track.level,
            track.samples.clone(),
            &self.solver.mesh,
            &self.state,
            earlier,
        );
        report.theta_fit = diagnostics::wave_speed(&self.theta_track.samples, analysis.transient_fraction).ok();
        report
    }
}

/// Result of [`run_simulation`].
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub state: FlowState,
    pub report: WaveReport,
    pub snapshots: Vec<PathBuf>,
    pub manifest: RunManifest,
}

/// Advance the configured model to `t_end`, writing snapshots every
/// `snapshot_every` steps (plus the initial and final states), the front
/// trajectory, the wave report and a manifest into `cfg.out_dir`.
pub fn run_simulation(cfg: &SimulationConfig) -> Result<RunOutput> {
    let mut sim = Simulation::new(cfg)?;
    let dir = cfg.out_dir.clone();
    fs::create_dir_all(&dir)?;
    let mut manifest = RunManifest::new(cfg);
    let mut snapshots = Vec::new();

    let mut snap = |state: &FlowState, sim: &Simulation, manifest: &mut RunManifest| -> Result<()> {
        let path = io::write_snapshot(&dir, state, &sim.solver.mesh)?;
        manifest.record(&path)?;
        manifest.snapshot_steps.push(state.step);
        snapshots.push(path);
        Ok(())
    };

    snap(&sim.state, &sim, &mut manifest)?;
    while !sim.finished() {
        sim.step()?;
        if sim.state.step % cfg.snapshot_every == 0 {
            snap(&sim.state, &sim, &mut manifest)?;
        }
    }
    if manifest.snapshot_steps.last() != Some(&sim.state.step) {
        snap(&sim.state, &sim, &mut manifest)?;
    }

    let report = sim.report();
    let mut written = Vec::new();
    let config_path = dir.join("config.txt");
    fs::write(&config_path, io::config_echo(cfg))?;
    written.push(config_path);
    let report_path = dir.join("report.txt");
    fs::write(&report_path, io::report_text(cfg.model, &report))?;
    written.push(report_path);
    let csv_path = dir.join("report.csv");
    fs::write(&csv_path, io::report_csv(cfg.model, &report))?;
    written.push(csv_path);
    let traj_path = dir.join("trajectory.csv");
    fs::write(&traj_path, trajectory_csv(&sim))?;
    written.push(traj_path);
    let state_path = dir.join("final_state.json");
    sim.state.save_json(&state_path)?;
    written.push(state_path);
    for p in &written {
        manifest.record(p)?;
    }
    manifest.write(&dir)?;

    Ok(RunOutput {
        state: sim.state,
        report,
        snapshots,
        manifest,
    })
}

fn trajectory_csv(sim: &Simulation) -> String {
    let mut out = String::from("field,level,t,x_f\n");
    for track in std::iter::once(&sim.theta_track).chain(sim.g_track.as_ref()) {
        for (t, x) in &track.samples {
            out.push_str(&format!("{},{:?},{:.16e},{:.16e}\n", track.field, track.level, t, x));
        }
    }
    out
}

/// Maximum allowed L-infinity difference per field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub field: Field,
    pub max_linf: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub field: Field,
    pub level: f64,
    pub metrics: ProfileComparison,
    pub threshold: Option<f64>,
}

impl ComparisonRow {
    pub fn passed(&self) -> bool {
        self.threshold.is_none_or(|t| self.metrics.linf <= t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(ComparisonRow::passed)
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("field,level,linf,l2,thickness_ratio,shift,threshold,passed\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:?},{:?},{:?},{:?},{:?},{},{}\n",
                r.field,
                r.level,
                r.metrics.linf,
                r.metrics.l2,
                r.metrics.thickness_ratio,
                r.metrics.shift,
                r.threshold.map(|t| format!("{t:?}")).unwrap_or_default(),
                r.passed()
            ));
        }
        out
    }
}

/// Compare the latest snapshots of two run directories field by field,
/// aligning each field at the midpoint of its end values in run `a`.
pub fn compare_runs(run_a: &Path, run_b: &Path, fields: &[Field], thresholds: &[Threshold]) -> Result<Comparison> {
    let a = io::latest_snapshot(run_a)?;
    let b = io::latest_snapshot(run_b)?;
    let rows = fields
        .iter()
        .map(|&field| {
            let pa = a.profile(field)?;
            let pb = b.profile(field)?;
            let level = if field == Field::G { 0.5 } else { pa.mid_level() };
            Ok(ComparisonRow {
                field,
                level,
                metrics: compare_profiles(&pa, &pb, level)?,
                threshold: thresholds.iter().find(|t| t.field == field).map(|t| t.max_linf),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Comparison { rows })
}

/// Flame-velocity configuration matching a primitive one.
pub fn flame_velocity_config(base: &SimulationConfig, u_f: f64, delta: f64, out_dir: PathBuf) -> SimulationConfig {
    let mut cfg = base.clone();
    cfg.preset = None;
    cfg.model = Model::FlameVelocity;
    cfg.u_f = Some(u_f);
    cfg.delta = Some(delta);
    cfg.out_dir = out_dir;
    cfg
}

#[derive(Debug, Clone)]
pub struct SweepMember {
    pub delta: f64,
    pub out_dir: PathBuf,
    pub report: WaveReport,
    /// Comparison with the reference, or why the profiles could not be aligned.
    pub comparison: std::result::Result<Comparison, String>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub u_f: f64,
    pub reference: WaveReport,
    pub members: Vec<SweepMember>,
}

impl SweepResult {
    pub fn csv(&self) -> String {
        let mut out = String::from("delta,u_f,u_p,thickness,linf_yF,linf_theta,thickness_ratio_yF\n");
        for m in &self.members {
            let row = |f: Field| {
                let cmp = m.comparison.as_ref().ok()?;
                cmp.rows.iter().find(|r| r.field == f).map(|r| r.metrics)
            };
            let yf = row(Field::YF);
            let th = row(Field::Theta);
            let fmt = |v: Option<f64>| v.map(|v| format!("{v:?}")).unwrap_or_else(|| "nan".into());
            out.push_str(&format!(
                "{:?},{:?},{},{},{},{},{}\n",
                m.delta,
                self.u_f,
                fmt(m.report.u_p()),
                fmt(m.report.thickness),
                fmt(yf.map(|c| c.linf)),
                fmt(th.map(|c| c.linf)),
                fmt(yf.map(|c| c.thickness_ratio)),
            ));
        }
        out
    }
}

/// Run the primitive reference once, take its flame velocity (or
/// `u_f_override`), then run the flame-velocity model for every `delta` in
/// parallel and compare each with the reference on `y_F` and `theta`.
/// Outputs go to `root/primitive`, `root/delta_<i>` and `root/sweep.csv`.
pub fn sweep(base: &SimulationConfig, deltas: &[f64], root: &Path, u_f_override: Option<f64>) -> Result<SweepResult> {
    if base.model != Model::Primitive {
        return Err(Error::config("sweep needs a primitive reference configuration"));
    }
    if deltas.is_empty() {
        return Err(Error::config("sweep needs at least one delta"));
    }
    let mut reference_cfg = base.clone();
    reference_cfg.out_dir = root.join("primitive");
    let reference = run_simulation(&reference_cfg)?.report;
    let u_f = match u_f_override {
        Some(v) => v,
        None => reference.u_f().ok_or_else(|| {
            Error::WaveNotSteady(format!(
                "reference run gave no flame velocity ({})",
                reference.failure.as_deref().unwrap_or("unknown")
            ))
        })?,
    };
    let members = deltas
        .par_iter()
        .enumerate()
        .map(|(i, &delta)| {
            let cfg = flame_velocity_config(base, u_f, delta, root.join(format!("delta_{i}")));
            let report = run_simulation(&cfg)?.report;
            let comparison = compare_runs(&reference_cfg.out_dir, &cfg.out_dir, &[Field::YF, Field::Theta], &[])
                .map_err(|e| e.to_string());
            Ok(SweepMember {
                delta,
                out_dir: cfg.out_dir,
                report,
                comparison,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let result = SweepResult {
        u_f,
        reference,
        members,
    };
    fs::write(root.join("sweep.csv"), result.csv())?;
    Ok(result)
}
