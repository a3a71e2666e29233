//! Text formats: `key = value` configuration files, snapshot CSV, wave
//! reports and the run manifest.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Model, SimulationConfig};
use crate::diagnostics::{Field, Profile, WaveReport};
use crate::error::{Error, Result};
use crate::mesh::Mesh1D;
use crate::species::{F, N, O, P};
use crate::state::FlowState;

pub const PRESET_REFERENCE: &str = "paper-sec4";

pub const CONFIG_KEYS: [&str; 23] = [
    "preset",
    "model",
    "x_left",
    "x_right",
    "n_cells",
    "dt",
    "t_end",
    "P_th",
    "lambda",
    "yF0",
    "yO0",
    "yN0",
    "yP0",
    "theta0",
    "ignition_cells",
    "ignition_theta",
    "u_f",
    "delta",
    "rho_u",
    "arrhenius_A",
    "arrhenius_Ta",
    "snapshot_every",
    "out_dir",
];

/// Parse a configuration file.
///
/// A `preset` line is applied first wherever it appears; every other key
/// overrides it. Without a preset, `model` is required and the remaining
/// keys default to the reference values.
pub fn parse_config(text: &str) -> Result<SimulationConfig> {
    let mut entries: Vec<(usize, &str, &str)> = Vec::new();
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| Error::config_at(line, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if !CONFIG_KEYS.contains(&key) {
            return Err(Error::config_at(line, format!("unknown key `{key}`")));
        }
        if value.is_empty() {
            return Err(Error::config_at(line, format!("missing value for `{key}`")));
        }
        if let Some(first) = seen.insert(key, line) {
            return Err(Error::config_at(line, format!("`{key}` already set on line {first}")));
        }
        entries.push((line, key, value));
    }

    let mut cfg = SimulationConfig::reference();
    cfg.preset = None;
    let mut has_model = false;
    if let Some(&(line, _, value)) = entries.iter().find(|e| e.1 == "preset") {
        if value != PRESET_REFERENCE {
            return Err(Error::config_at(line, format!("unknown preset `{value}`")));
        }
        cfg = SimulationConfig::reference();
        has_model = true;
    }

    for &(line, key, value) in &entries {
        let bad = |what: &str| Error::config_at(line, format!("`{key}`: {what}, got `{value}`"));
        let float = || -> Result<f64> {
            value
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad("expected a number"))
        };
        let positive =
            || -> Result<f64> { float().and_then(|v| if v > 0.0 { Ok(v) } else { Err(bad("must be > 0")) }) };
        let fraction = || -> Result<f64> {
            float().and_then(|v| {
                if (0.0..=1.0).contains(&v) {
                    Ok(v)
                } else {
                    Err(bad("must lie in [0,1]"))
                }
            })
        };
        let count = || -> Result<usize> {
            value
                .parse::<usize>()
                .map_err(|_| bad("expected a non-negative integer"))
        };
        match key {
            "preset" => {}
            "model" => {
                cfg.model = value
                    .parse()
                    .map_err(|_| bad("expected `primitive` or `flame-velocity`"))?;
                has_model = true;
            }
            "x_left" => cfg.x_left = float()?,
            "x_right" => cfg.x_right = float()?,
            "n_cells" => {
                cfg.n_cells = count()?;
                if cfg.n_cells < 3 {
                    return Err(bad("need at least 3 cells"));
                }
            }
            "dt" => cfg.dt = positive()?,
            "t_end" => {
                cfg.t_end = float()?;
                if cfg.t_end < 0.0 {
                    return Err(bad("must be >= 0"));
                }
            }
            "P_th" => cfg.p_th = positive()?,
            "lambda" => {
                cfg.lambda = float()?;
                if cfg.lambda < 0.0 {
                    return Err(bad("must be >= 0"));
                }
            }
            "yF0" => cfg.y0[F] = fraction()?,
            "yO0" => cfg.y0[O] = fraction()?,
            "yN0" => cfg.y0[N] = fraction()?,
            "yP0" => cfg.y0[P] = fraction()?,
            "theta0" => cfg.theta0 = positive()?,
            "ignition_cells" => cfg.ignition_cells = count()?,
            "ignition_theta" => cfg.ignition_theta = positive()?,
            "u_f" => {
                let v = float()?;
                if v < 0.0 {
                    return Err(bad("must be >= 0"));
                }
                cfg.u_f = Some(v);
            }
            "delta" => cfg.delta = Some(positive()?),
            "rho_u" => cfg.rho_u = Some(positive()?),
            "arrhenius_A" => {
                cfg.arrhenius.prefactor = float()?;
                if cfg.arrhenius.prefactor < 0.0 {
                    return Err(bad("must be >= 0"));
                }
            }
            "arrhenius_Ta" => cfg.arrhenius.activation_temperature = float()?,
            "snapshot_every" => {
                cfg.snapshot_every = count()?;
                if cfg.snapshot_every == 0 {
                    return Err(bad("must be >= 1"));
                }
            }
            "out_dir" => cfg.out_dir = PathBuf::from(value),
            _ => unreachable!("key list checked above"),
        }
    }

    if !has_model {
        return Err(Error::config("`model` is required (or `preset = paper-sec4`)"));
    }
    cfg.validate().map_err(|e| match e {
        Error::Config { line: None, msg } => {
            // point at the last line touching the offending quantity, if any
            let line = entries.iter().rev().find(|e| msg.contains(e.1)).map(|e| e.0);
            Error::Config { line, msg }
        }
        other => other,
    })?;
    Ok(cfg)
}

pub fn read_config(path: &Path) -> Result<SimulationConfig> {
    parse_config(&fs::read_to_string(path)?)
}

/// Configuration as parseable text. Floats are written in shortest
/// round-trip form so that parsing the echo reproduces the run exactly.
pub fn config_echo(cfg: &SimulationConfig) -> String {
    let mut out = String::new();
    let mut put = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    put("model", cfg.model.to_string());
    put("x_left", format!("{:?}", cfg.x_left));
    put("x_right", format!("{:?}", cfg.x_right));
    put("n_cells", cfg.n_cells.to_string());
    put("dt", format!("{:?}", cfg.dt));
    put("t_end", format!("{:?}", cfg.t_end));
    put("P_th", format!("{:?}", cfg.p_th));
    put("lambda", format!("{:?}", cfg.lambda));
    put("yF0", format!("{:?}", cfg.y0[F]));
    put("yO0", format!("{:?}", cfg.y0[O]));
    put("yN0", format!("{:?}", cfg.y0[N]));
    put("yP0", format!("{:?}", cfg.y0[P]));
    put("theta0", format!("{:?}", cfg.theta0));
    put("ignition_cells", cfg.ignition_cells.to_string());
    put("ignition_theta", format!("{:?}", cfg.ignition_theta));
    if let Some(v) = cfg.u_f {
        put("u_f", format!("{v:?}"));
    }
    if let Some(v) = cfg.delta {
        put("delta", format!("{v:?}"));
    }
    if let Some(v) = cfg.rho_u {
        put("rho_u", format!("{v:?}"));
    }
    put("arrhenius_A", format!("{:?}", cfg.arrhenius.prefactor));
    put("arrhenius_Ta", format!("{:?}", cfg.arrhenius.activation_temperature));
    put("snapshot_every", cfg.snapshot_every.to_string());
    put("out_dir", cfg.out_dir.display().to_string());
    out
}

pub fn snapshot_name(step: usize) -> String {
    format!("snap_{step}.csv")
}

/// Snapshot CSV text. Velocities are face values averaged to cell centers.
pub fn snapshot_csv(state: &FlowState, mesh: &Mesh1D) -> String {
    let with_g = state.g.is_some();
    let mut out = String::from("x,rho,u,yF,yO,yP,yN,z,theta");
    if with_g {
        out.push_str(",G");
    }
    out.push('\n');
    let u = state.cell_velocity();
    for k in 0..state.n_cells() {
        let y = state.y[k];
        let row = [
            mesh.centers()[k],
            state.rho[k],
            u[k],
            y[F],
            y[O],
            y[P],
            y[N],
            state.z[k],
            state.theta[k],
        ];
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v:.16e}");
        }
        if let Some(g) = &state.g {
            let _ = write!(out, ",{:.16e}", g[k]);
        }
        out.push('\n');
    }
    out
}

pub fn write_snapshot(dir: &Path, state: &FlowState, mesh: &Mesh1D) -> Result<PathBuf> {
    let path = dir.join(snapshot_name(state.step));
    fs::write(&path, snapshot_csv(state, mesh))?;
    Ok(path)
}

/// Columns of one snapshot file.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: Option<usize>,
    pub columns: Vec<String>,
    pub data: Vec<Vec<f64>>,
}

impl Snapshot {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let fmt_err = |msg: String| Error::Format {
            path: path.to_owned(),
            msg,
        };
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| fmt_err("empty snapshot".into()))?;
        let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
        if columns.first().map(String::as_str) != Some("x") {
            return Err(fmt_err("first column must be `x`".into()));
        }
        let mut data = vec![Vec::new(); columns.len()];
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != columns.len() {
                return Err(fmt_err(format!(
                    "row {} has {} values, expected {}",
                    i + 2,
                    cells.len(),
                    columns.len()
                )));
            }
            for (col, c) in data.iter_mut().zip(cells) {
                col.push(
                    c.trim()
                        .parse::<f64>()
                        .map_err(|e| fmt_err(format!("row {}: {e}", i + 2)))?,
                );
            }
        }
        if data[0].len() < 2 {
            return Err(fmt_err("snapshot has fewer than 2 rows".into()));
        }
        let step = path.file_name().and_then(|n| n.to_str()).and_then(parse_snapshot_step);
        Ok(Self { step, columns, data })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?, path)
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .position(|c| c == name)
            .map(|i| self.data[i].as_slice())
    }

    pub fn profile(&self, field: Field) -> Result<Profile> {
        let values = self
            .column(field.column())
            .ok_or_else(|| Error::FrontNotEstablished(format!("snapshot has no `{field}` column")))?;
        Profile::new(self.data[0].clone(), values.to_vec())
    }
}

fn parse_snapshot_step(name: &str) -> Option<usize> {
    name.strip_prefix("snap_")?.strip_suffix(".csv")?.parse().ok()
}

/// Snapshot files of a run directory, ordered by step.
pub fn list_snapshots(dir: &Path) -> Result<Vec<(usize, PathBuf)>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if let Some(step) = path.file_name().and_then(|n| n.to_str()).and_then(parse_snapshot_step) {
            out.push((step, path));
        }
    }
    out.sort();
    Ok(out)
}

pub fn latest_snapshot(dir: &Path) -> Result<Snapshot> {
    let (_, path) = list_snapshots(dir)?.pop().ok_or_else(|| Error::Format {
        path: dir.to_owned(),
        msg: "no snapshot files".into(),
    })?;
    Snapshot::read(&path)
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| format!("{v:?}")).unwrap_or_else(|| "nan".into())
}

/// Flat `(key, value)` view of a report shared by the text and CSV forms.
pub fn report_fields(model: Model, report: &WaveReport) -> Vec<(&'static str, String)> {
    let p = report.plateaus;
    let v = report.flame_velocity;
    vec![
        ("model", model.to_string()),
        ("tracked_field", report.tracked_field.to_string()),
        ("level", format!("{:?}", report.level)),
        ("samples", report.trajectory.len().to_string()),
        ("u_p", opt(report.fit.map(|f| f.slope))),
        ("fit_r2", opt(report.fit.map(|f| f.r_squared))),
        ("u_p_theta", opt(report.theta_fit.map(|f| f.slope))),
        ("rho_u", opt(p.map(|p| p.rho_u))),
        ("u_u", opt(p.map(|p| p.u_u))),
        ("rho_b", opt(p.map(|p| p.rho_b))),
        ("u_b", opt(p.map(|p| p.u_b))),
        ("theta_b", opt(p.map(|p| p.theta_b))),
        ("yF_b", opt(p.map(|p| p.y_b[F]))),
        ("yO_b", opt(p.map(|p| p.y_b[O]))),
        ("yP_b", opt(p.map(|p| p.y_b[P]))),
        ("u_f", opt(v.map(|v| v.from_jump))),
        ("u_f_kinematic", opt(v.map(|v| v.kinematic))),
        ("u_f_discrepancy", opt(v.map(|v| v.discrepancy))),
        ("thickness", opt(report.thickness)),
        ("steady_linf_yF", opt(report.steady_linf)),
        ("steady", report.steady.to_string()),
        (
            "failure",
            report.failure.clone().unwrap_or_default().replace(['\n', ','], ";"),
        ),
    ]
}

pub fn report_text(model: Model, report: &WaveReport) -> String {
    report_fields(model, report)
        .into_iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect()
}

pub fn report_csv(model: Model, report: &WaveReport) -> String {
    let fields = report_fields(model, report);
    let header: Vec<&str> = fields.iter().map(|f| f.0).collect();
    let row: Vec<&str> = fields.iter().map(|f| f.1.as_str()).collect();
    format!("{}\n{}\n", header.join(","), row.join(","))
}

/// Read back a `report.txt` block as key-value pairs.
pub fn read_report(path: &Path) -> Result<HashMap<String, String>> {
    let text = fs::read_to_string(path)?;
    Ok(text
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect())
}

/// Flame velocity recorded in a run directory's report.
pub fn report_flame_velocity(dir: &Path) -> Result<f64> {
    let path = dir.join("report.txt");
    let map = read_report(&path)?;
    map.get("u_f")
        .and_then(|v| v.parse::<f64>().ok())
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Format {
            path,
            msg: "report has no flame velocity".into(),
        })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Record of one run: configuration echo, output directory, snapshot steps
/// and every file written with its checksum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: String,
    pub out_dir: PathBuf,
    pub snapshot_steps: Vec<usize>,
    pub files: Vec<FileEntry>,
}

pub const MANIFEST_NAME: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    pub fn new(cfg: &SimulationConfig) -> Self {
        Self {
            config: config_echo(cfg),
            out_dir: cfg.out_dir.clone(),
            snapshot_steps: Vec::new(),
            files: Vec::new(),
        }
    }

    /// Checksum a file already written into the output directory.
    pub fn record(&mut self, path: &Path) -> Result<()> {
        let bytes = fs::read(path)?;
        let name = path
            .file_name()
            .and_then(|n| n.to_str())
            .ok_or_else(|| Error::Format {
                path: path.to_owned(),
                msg: "not a file name".into(),
            })?
            .to_string();
        self.files.retain(|f| f.name != name);
        self.files.push(FileEntry {
            name,
            bytes: bytes.len() as u64,
            sha256: sha256_hex(&bytes),
        });
        Ok(())
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(MANIFEST_NAME);
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Format {
            path: path.clone(),
            msg: e.to_string(),
        })?;
        fs::write(&path, text)?;
        Ok(path)
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_NAME);
        let text = fs::read_to_string(&path)?;
        serde_json::from_str(&text).map_err(|e| Error::Format {
            path,
            msg: e.to_string(),
        })
    }

    /// Files whose current checksum no longer matches the manifest.
    pub fn verify(&self, dir: &Path) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for f in &self.files {
            let bytes = fs::read(dir.join(&f.name))?;
            if sha256_hex(&bytes) != f.sha256 {
                bad.push(f.name.clone());
            }
        }
        Ok(bad)
    }
}
