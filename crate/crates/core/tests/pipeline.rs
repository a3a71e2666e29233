use std::fs;
use std::path::Path;

use dustflame::diagnostics::Field;
use dustflame::io::{self, RunManifest};
use dustflame::run::{self, flame_velocity_config};
use dustflame::{Model, SimulationConfig};

fn small(dir: &Path) -> SimulationConfig {
    let mut cfg = SimulationConfig::reference();
    cfg.n_cells = 128;
    cfg.t_end = 0.01;
    cfg.snapshot_every = 20;
    cfg.out_dir = dir.to_path_buf();
    cfg
}

fn snapshot_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    io::list_snapshots(dir)
        .unwrap()
        .into_iter()
        .map(|(_, p)| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(p).unwrap(),
            )
        })
        .collect()
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let a = small(&tmp.path().join("a"));
    let b = small(&tmp.path().join("b"));
    run::run_simulation(&a).unwrap();
    run::run_simulation(&b).unwrap();
    let (sa, sb) = (snapshot_bytes(&a.out_dir), snapshot_bytes(&b.out_dir));
    assert_eq!(sa.len(), 4);
    assert_eq!(sa, sb);
}

#[test]
fn manifest_lists_every_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small(tmp.path());
    let out = run::run_simulation(&cfg).unwrap();
    let manifest = RunManifest::read(tmp.path()).unwrap();
    assert_eq!(manifest, out.manifest);
    assert_eq!(manifest.snapshot_steps, vec![0, 20, 40, 50]);
    let mut on_disk: Vec<String> = fs::read_dir(tmp.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n != io::MANIFEST_NAME)
        .collect();
    on_disk.sort();
    let mut listed: Vec<String> = manifest.files.iter().map(|f| f.name.clone()).collect();
    listed.sort();
    assert_eq!(on_disk, listed);
    assert!(manifest.verify(tmp.path()).unwrap().is_empty());

    fs::write(tmp.path().join("snap_20.csv"), "tampered").unwrap();
    assert_eq!(manifest.verify(tmp.path()).unwrap(), vec!["snap_20.csv".to_string()]);
}

#[test]
fn echo_replays_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small(&tmp.path().join("first"));
    run::run_simulation(&cfg).unwrap();
    let echoed = fs::read_to_string(cfg.out_dir.join("config.txt")).unwrap();
    let mut replay = io::parse_config(&echoed).unwrap();
    replay.out_dir = tmp.path().join("second");
    run::run_simulation(&replay).unwrap();
    assert_eq!(snapshot_bytes(&cfg.out_dir), snapshot_bytes(&replay.out_dir));
}

#[test]
fn zero_end_time_writes_initial_snapshot_only() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = small(tmp.path());
    cfg.t_end = 0.0;
    let out = run::run_simulation(&cfg).unwrap();
    assert_eq!(out.manifest.snapshot_steps, vec![0]);
    assert!(!out.report.steady);
    assert!(out.report.failure.is_some());
    assert_eq!(out.state.step, 0);
}

#[test]
fn snapshot_matches_final_state() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small(tmp.path());
    let out = run::run_simulation(&cfg).unwrap();
    let snap = io::latest_snapshot(tmp.path()).unwrap();
    assert_eq!(snap.step, Some(out.state.step));
    assert_eq!(snap.column("theta").unwrap(), out.state.theta.as_slice());
    assert_eq!(snap.column("rho").unwrap(), out.state.rho.as_slice());
    let json = dustflame::FlowState::load_json(&tmp.path().join("final_state.json")).unwrap();
    assert_eq!(json, out.state);
}

#[test]
fn run_compared_with_itself_is_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = small(tmp.path());
    cfg.t_end = 0.005;
    run::run_simulation(&cfg).unwrap();
    let cmp = run::compare_runs(tmp.path(), tmp.path(), &[Field::YF, Field::Theta], &[]).unwrap();
    for row in &cmp.rows {
        assert_eq!(row.metrics.linf, 0.0);
        assert_eq!(row.metrics.l2, 0.0);
        assert_eq!(row.metrics.thickness_ratio, 1.0);
    }
    assert!(cmp.passed());
}

#[test]
fn missing_snapshots_are_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(run::compare_runs(tmp.path(), tmp.path(), &[Field::YF], &[]).is_err());
}

#[test]
fn flame_velocity_run_has_g_column() {
    let tmp = tempfile::tempdir().unwrap();
    let base = small(tmp.path());
    let cfg = flame_velocity_config(&base, 0.01, 1e-4, tmp.path().join("g"));
    assert_eq!(cfg.model, Model::FlameVelocity);
    let out = run::run_simulation(&cfg).unwrap();
    let snap = io::latest_snapshot(&cfg.out_dir).unwrap();
    assert!(snap.column("G").is_some());
    assert_eq!(out.report.tracked_field, Field::G);
    out.state.check_invariants().unwrap();
}

#[test]
fn cfl_refusal_halves_the_step() {
    let tmp = tempfile::tempdir().unwrap();
    let mut base = small(tmp.path());
    base.n_cells = 256;
    base.ignition_cells = 8;
    base.dt = 2e-3;
    base.t_end = 0.1;
    let cfg = flame_velocity_config(&base, 0.05, 1e-4, tmp.path().join("g"));
    let mut sim = run::Simulation::new(&cfg).unwrap();
    sim.run_to_end().unwrap();
    assert!(sim.dt_halvings > 0);
    assert!(sim.solver.dt < cfg.dt);
    let residual = sim.state.mass_balance_residual(&sim.solver.mesh, sim.solver.dt);
    assert!(
        residual.iter().all(|&r| r < 1e-12),
        "{:e}",
        residual.iter().cloned().fold(0.0, f64::max)
    );
}
