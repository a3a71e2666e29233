//! Travelling-wave measurements: front tracking, propagation speed, plateau
//! states on both sides of the flame, flame velocity from the mass-balance
//! jump conditions, and aligned profile comparison.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::Mesh1D;
use crate::species::{F, N, O, P};
use crate::state::FlowState;

/// Cell field selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Theta,
    Rho,
    Velocity,
    YF,
    YO,
    YP,
    YN,
    Z,
    G,
}

impl Field {
    pub const ALL: [Field; 9] = [
        Field::Rho,
        Field::Velocity,
        Field::YF,
        Field::YO,
        Field::YP,
        Field::YN,
        Field::Z,
        Field::Theta,
        Field::G,
    ];

    /// Column name in snapshot files.
    pub fn column(self) -> &'static str {
        match self {
            Field::Theta => "theta",
            Field::Rho => "rho",
            Field::Velocity => "u",
            Field::YF => "yF",
            Field::YO => "yO",
            Field::YP => "yP",
            Field::YN => "yN",
            Field::Z => "z",
            Field::G => "G",
        }
    }

    pub fn values(self, state: &FlowState) -> Option<Vec<f64>> {
        Some(match self {
            Field::Theta => state.theta.clone(),
            Field::Rho => state.rho.clone(),
            Field::Velocity => state.cell_velocity(),
            Field::YF => state.fraction(F),
            Field::YO => state.fraction(O),
            Field::YP => state.fraction(P),
            Field::YN => state.fraction(N),
            Field::Z => state.z.clone(),
            Field::G => state.g.clone()?,
        })
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Field::ALL
            .into_iter()
            .find(|f| f.column() == s)
            .ok_or_else(|| Error::config(format!("unknown field `{s}`")))
    }
}

/// Sampled cell values of one field.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub x: Vec<f64>,
    pub values: Vec<f64>,
}

impl Profile {
    pub fn new(x: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if x.len() != values.len() || x.len() < 2 {
            return Err(Error::Numerical(
                "profile needs matching x and values, at least 2 points".into(),
            ));
        }
        Ok(Self { x, values })
    }

    pub fn from_state(state: &FlowState, mesh: &Mesh1D, field: Field) -> Result<Self> {
        let values = field
            .values(state)
            .ok_or_else(|| Error::FrontNotEstablished(format!("state has no {field} field")))?;
        Self::new(mesh.centers().to_vec(), values)
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Midpoint between the two end values.
    pub fn mid_level(&self) -> f64 {
        0.5 * (self.first() + self.last())
    }

    /// Linear interpolation, constant extrapolation beyond the ends.
    pub fn sample(&self, x: f64) -> f64 {
        let n = self.x.len();
        if x <= self.x[0] {
            return self.values[0];
        }
        if x >= self.x[n - 1] {
            return self.values[n - 1];
        }
        let j = self.x.partition_point(|&xi| xi <= x);
        let (x0, x1) = (self.x[j - 1], self.x[j]);
        let w = (x - x0) / (x1 - x0);
        self.values[j - 1] + w * (self.values[j] - self.values[j - 1])
    }

    pub fn shifted(&self, dx: f64) -> Self {
        Self {
            x: self.x.iter().map(|x| x + dx).collect(),
            values: self.values.clone(),
        }
    }
}

/// Position where `profile` crosses `level`, by linear interpolation between
/// the bracketing cell centers. Exactly one crossing is required.
pub fn front_position(profile: &Profile, level: f64) -> Result<f64> {
    let mut found = None;
    let mut count = 0;
    let side = |v: f64| v >= level;
    for j in 1..profile.values.len() {
        let (a, b) = (profile.values[j - 1], profile.values[j]);
        if side(a) != side(b) {
            count += 1;
            let w = (level - a) / (b - a);
            found = Some(profile.x[j - 1] + w * (profile.x[j] - profile.x[j - 1]));
        }
    }
    match (count, found) {
        (1, Some(x)) => Ok(x),
        (0, _) => Err(Error::FrontNotEstablished(format!("no crossing of level {level}"))),
        (c, _) => Err(Error::FrontNotEstablished(format!("{c} crossings of level {level}"))),
    }
}

/// Least-squares line through `(t, x)` samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination; 1 for data with no spread to explain.
    pub r_squared: f64,
    pub samples: usize,
}

pub fn fit_line(samples: &[(f64, f64)]) -> Result<LineFit> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let nf = n as f64;
    let t_mean = samples.iter().map(|s| s.0).sum::<f64>() / nf;
    let x_mean = samples.iter().map(|s| s.1).sum::<f64>() / nf;
    let stt: f64 = samples.iter().map(|s| (s.0 - t_mean).powi(2)).sum();
    let stx: f64 = samples.iter().map(|s| (s.0 - t_mean) * (s.1 - x_mean)).sum();
    let sxx: f64 = samples.iter().map(|s| (s.1 - x_mean).powi(2)).sum();
    if stt == 0.0 {
        return Err(Error::Numerical("all samples at the same time".into()));
    }
    let slope = stx / stt;
    let intercept = x_mean - slope * t_mean;
    let ss_res: f64 = samples.iter().map(|s| (s.1 - intercept - slope * s.0).powi(2)).sum();
    // spread at rounding level counts as no spread
    let flat = sxx <= (1e-14 * x_mean.abs()).powi(2) * nf;
    let r_squared = if flat { 1.0 } else { 1.0 - ss_res / sxx };
    Ok(LineFit {
        slope,
        intercept,
        r_squared,
        samples: n,
    })
}

/// Fraction of the trajectory discarded as the ignition transient.
pub const DEFAULT_TRANSIENT_FRACTION: f64 = 0.2;
pub const MIN_FIT_SAMPLES: usize = 10;

/// Propagation speed from the front trajectory after dropping the leading
/// `transient` fraction of samples.
pub fn wave_speed(trajectory: &[(f64, f64)], transient: f64) -> Result<LineFit> {
    let skip = (trajectory.len() as f64 * transient).floor() as usize;
    let kept = &trajectory[skip.min(trajectory.len())..];
    if kept.len() < MIN_FIT_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_FIT_SAMPLES,
            got: kept.len(),
        });
    }
    fit_line(kept)
}

/// Averaged states on the burnt (left) and fresh (right) sides of the front.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plateaus {
    pub rho_u: f64,
    pub u_u: f64,
    pub rho_b: f64,
    pub u_b: f64,
    pub y_b: [f64; 4],
    pub theta_b: f64,
    pub y_u: [f64; 4],
    pub theta_u: f64,
}

/// Maximum relative spread `(max - min) / mean` of density over a plateau.
pub const PLATEAU_FLATNESS: f64 = 1e-3;

/// Average the cells lying between `margin` and `margin + window` away from
/// the front on each side. Both windows must contain cells and be flat in
/// density.
pub fn plateau_states(state: &FlowState, mesh: &Mesh1D, front: f64, margin: f64, window: f64) -> Result<Plateaus> {
    let x = mesh.centers();
    let burnt: Vec<usize> = (0..x.len())
        .filter(|&k| x[k] < front - margin && x[k] >= front - margin - window)
        .collect();
    let fresh: Vec<usize> = (0..x.len())
        .filter(|&k| x[k] > front + margin && x[k] <= front + margin + window)
        .collect();
    let b = average_region(state, &burnt, "burnt")?;
    let u = average_region(state, &fresh, "fresh")?;
    Ok(Plateaus {
        rho_u: u.rho,
        u_u: u.u,
        rho_b: b.rho,
        u_b: b.u,
        y_b: b.y,
        theta_b: b.theta,
        y_u: u.y,
        theta_u: u.theta,
    })
}

struct RegionMean {
    rho: f64,
    u: f64,
    y: [f64; 4],
    theta: f64,
}

fn average_region(state: &FlowState, cells: &[usize], name: &str) -> Result<RegionMean> {
    if cells.is_empty() {
        return Err(Error::WaveNotSteady(format!("no cells in the {name} plateau window")));
    }
    let nf = cells.len() as f64;
    let rho: Vec<f64> = cells.iter().map(|&k| state.rho[k]).collect();
    let mean = rho.iter().sum::<f64>() / nf;
    let spread = rho.iter().cloned().fold(f64::MIN, f64::max) - rho.iter().cloned().fold(f64::MAX, f64::min);
    if spread > PLATEAU_FLATNESS * mean {
        return Err(Error::WaveNotSteady(format!(
            "{name} plateau density varies by {:.3}%",
            100.0 * spread / mean
        )));
    }
    let u_cells = state.cell_velocity();
    let mut y = [0.0; 4];
    for &k in cells {
        for (acc, v) in y.iter_mut().zip(state.y[k]) {
            *acc += v / nf;
        }
    }
    Ok(RegionMean {
        rho: mean,
        u: cells.iter().map(|&k| u_cells[k]).sum::<f64>() / nf,
        y,
        theta: cells.iter().map(|&k| state.theta[k]).sum::<f64>() / nf,
    })
}

/// The two readings of the flame velocity across a steady front with the
/// burnt gas at rest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlameVelocity {
    /// `u_u rho_b / (rho_u - rho_b)`, from the mass jump condition.
    pub from_jump: f64,
    /// `u_p - u_u`.
    pub kinematic: f64,
    /// `|from_jump - kinematic| / |from_jump|` (0 when both vanish).
    pub discrepancy: f64,
}

pub fn flame_velocity_from_jump(u_p: f64, u_u: f64, rho_u: f64, rho_b: f64) -> Result<FlameVelocity> {
    let jump = rho_u - rho_b;
    if jump == 0.0 || !jump.is_finite() {
        return Err(Error::Domain("no density jump across the front".into()));
    }
    let from_jump = u_u * rho_b / jump;
    let kinematic = u_p - u_u;
    let diff = (from_jump - kinematic).abs();
    let discrepancy = if diff == 0.0 { 0.0 } else { diff / from_jump.abs() };
    Ok(FlameVelocity {
        from_jump,
        kinematic,
        discrepancy,
    })
}

/// Front speed implied by the jump condition with `u_b = 0`.
pub fn jump_front_speed(u_u: f64, rho_u: f64, rho_b: f64) -> f64 {
    rho_u * u_u / (rho_u - rho_b)
}

/// Distance between the 10% and 90% crossings of the transition between the
/// profile's end values.
pub fn transition_thickness(profile: &Profile) -> Result<f64> {
    transition_thickness_between(profile, profile.first(), profile.last())
}

pub fn transition_thickness_between(profile: &Profile, from: f64, to: f64) -> Result<f64> {
    if from == to {
        return Err(Error::FrontNotEstablished(
            "no transition between equal end values".into(),
        ));
    }
    let a = outermost_crossing(profile, from + 0.1 * (to - from), from < to)?;
    let b = outermost_crossing(profile, from + 0.9 * (to - from), from < to)?;
    Ok((b - a).abs())
}

/// Crossing of `level` nearest the middle of the transition: the last one
/// found scanning from the left for a rising profile.
fn outermost_crossing(profile: &Profile, level: f64, rising: bool) -> Result<f64> {
    let mut found = None;
    for j in 1..profile.values.len() {
        let (a, b) = (profile.values[j - 1], profile.values[j]);
        let crosses = if rising {
            a < level && b >= level
        } else {
            a > level && b <= level
        };
        if crosses {
            let w = (level - a) / (b - a);
            found = Some(profile.x[j - 1] + w * (profile.x[j] - profile.x[j - 1]));
        }
    }
    found.ok_or_else(|| Error::FrontNotEstablished(format!("profile never crosses {level}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileComparison {
    pub linf: f64,
    pub l2: f64,
    /// Transition thickness of `b` over that of `a`.
    pub thickness_ratio: f64,
    /// Translation applied to `b`.
    pub shift: f64,
}

/// Translate `b` so its crossing of `level` matches that of `a`, resample it
/// on `a`'s points and measure the pointwise difference.
pub fn compare_profiles(a: &Profile, b: &Profile, level: f64) -> Result<ProfileComparison> {
    let shift = front_position(a, level)? - front_position(b, level)?;
    let moved = b.shifted(shift);
    let diffs: Vec<f64> =
        a.x.iter()
            .zip(&a.values)
            .map(|(&x, &v)| (v - moved.sample(x)).abs())
            .collect();
    let linf = diffs.iter().cloned().fold(0.0, f64::max);
    let l2 = (diffs.iter().map(|d| d * d).sum::<f64>() / diffs.len() as f64).sqrt();
    let thickness_ratio = transition_thickness(b)? / transition_thickness(a)?;
    Ok(ProfileComparison {
        linf,
        l2,
        thickness_ratio,
        shift,
    })
}

/// Summary of a travelling-wave run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveReport {
    /// Field and level used to track the front.
    pub tracked_field: Field,
    pub level: f64,
    pub trajectory: Vec<(f64, f64)>,
    pub fit: Option<LineFit>,
    /// Speed of the temperature front, tracked for both models so that they
    /// can be compared on a common field.
    pub theta_fit: Option<LineFit>,
    pub plateaus: Option<Plateaus>,
    pub flame_velocity: Option<FlameVelocity>,
    /// 10%-90% transition thickness of `y_F` between the plateaus.
    pub thickness: Option<f64>,
    /// L-infinity difference of aligned `y_F` profiles at two times.
    pub steady_linf: Option<f64>,
    pub steady: bool,
    /// Why the wave could not be characterized, if it could not.
    pub failure: Option<String>,
}

impl WaveReport {
    pub fn not_steady(field: Field, level: f64, trajectory: Vec<(f64, f64)>, why: impl Into<String>) -> Self {
        Self {
            tracked_field: field,
            level,
            trajectory,
            fit: None,
            theta_fit: None,
            plateaus: None,
            flame_velocity: None,
            thickness: None,
            steady_linf: None,
            steady: false,
            failure: Some(why.into()),
        }
    }

    pub fn u_p(&self) -> Option<f64> {
        self.fit.map(|f| f.slope)
    }

    pub fn u_f(&self) -> Option<f64> {
        self.flame_velocity.map(|v| v.from_jump)
    }
}

/// Parameters of the wave analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveAnalysis {
    pub transient_fraction: f64,
    /// Distance from the front excluded from the plateau windows (m).
    pub margin: f64,
    /// Width of each plateau window (m).
    pub window: f64,
    pub steady_tolerance: f64,
}

impl WaveAnalysis {
    pub fn for_domain(length: f64) -> Self {
        Self {
            transient_fraction: DEFAULT_TRANSIENT_FRACTION,
            margin: 0.15 * length,
            window: 0.1 * length,
            steady_tolerance: 1e-3,
        }
    }

    /// Characterize the wave from its trajectory, the final state and an
    /// earlier snapshot (used for the steadiness check). Every quantity that
    /// can be measured is reported; the first failure is recorded and clears
    /// the steady flag.
    pub fn analyze(
        &self,
        field: Field,
        level: f64,
        trajectory: Vec<(f64, f64)>,
        mesh: &Mesh1D,
        last: &FlowState,
        earlier: &FlowState,
    ) -> WaveReport {
        let mut failures: Vec<String> = Vec::new();

        let fit = keep(&mut failures, wave_speed(&trajectory, self.transient_fraction));
        let plateaus = keep(
            &mut failures,
            Profile::from_state(last, mesh, field)
                .and_then(|p| front_position(&p, level))
                .and_then(|front| plateau_states(last, mesh, front, self.margin, self.window)),
        );
        let flame_velocity = match (fit, plateaus) {
            (Some(f), Some(p)) => keep(
                &mut failures,
                flame_velocity_from_jump(f.slope, p.u_u, p.rho_u, p.rho_b),
            ),
            _ => None,
        };
        let (thickness, steady_linf) = match (
            Profile::from_state(last, mesh, Field::YF),
            Profile::from_state(earlier, mesh, Field::YF),
        ) {
            (Ok(y_last), Ok(y_earlier)) => {
                let (burnt, fresh) = plateaus
                    .map(|p| (p.y_b[F], p.y_u[F]))
                    .unwrap_or((y_last.first(), y_last.last()));
                let thickness = keep(&mut failures, transition_thickness_between(&y_last, burnt, fresh));
                let y_level = 0.5 * (burnt + fresh);
                let linf = keep(
                    &mut failures,
                    compare_profiles(&y_last, &y_earlier, y_level).map(|c| c.linf),
                );
                (thickness, linf)
            }
            (a, b) => {
                keep(&mut failures, a.and(b));
                (None, None)
            }
        };
        if let Some(linf) = steady_linf {
            if linf > self.steady_tolerance {
                failures.push(format!("aligned y_F snapshots differ by {linf:.3e}"));
            }
        }
        WaveReport {
            tracked_field: field,
            level,
            trajectory,
            fit,
            theta_fit: None,
            plateaus,
            flame_velocity,
            thickness,
            steady_linf,
            steady: failures.is_empty(),
            failure: failures.into_iter().next(),
        }
    }
}

fn keep<T>(failures: &mut Vec<String>, r: Result<T>) -> Option<T> {
    r.map_err(|e| failures.push(e.to_string())).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn uniform_profile(values: Vec<f64>) -> Profile {
        let n = values.len();
        let x = (0..n).map(|k| (k as f64 + 0.5) / n as f64).collect();
        Profile::new(x, values).unwrap()
    }

    #[test]
    fn step_front() {
        let n = 100;
        let p = uniform_profile((0..n).map(|k| if k < 50 { 0.0 } else { 1.0 }).collect());
        let x = front_position(&p, 0.5).unwrap();
        assert!((x - 0.5).abs() <= 1.0 / n as f64);
    }

    #[test]
    fn linear_ramp_front_is_exact() {
        let x: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
        let p = Profile::new(x.clone(), x).unwrap();
        assert!((front_position(&p, 0.25).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn flat_or_multiple_crossings_rejected() {
        assert!(front_position(&uniform_profile(vec![0.3; 10]), 0.5).is_err());
        let p = uniform_profile(vec![0.0, 1.0, 0.0, 1.0]);
        assert!(matches!(front_position(&p, 0.5), Err(Error::FrontNotEstablished(_))));
    }

    #[test]
    fn exact_line_fit() {
        let traj: Vec<(f64, f64)> = (0..50)
            .map(|k| {
                let t = k as f64 * 0.01;
                (t, 0.1 + 2.0 * t)
            })
            .collect();
        let fit = wave_speed(&traj, 0.2).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit.samples, 40);
    }

    #[test]
    fn constant_trajectory_has_zero_speed() {
        let traj: Vec<(f64, f64)> = (0..20).map(|k| (k as f64, 0.3)).collect();
        let fit = wave_speed(&traj, 0.2).unwrap();
        assert!(fit.slope.abs() < 1e-15);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn noisy_line_slope() {
        // deterministic noise bounded by 1e-6
        let traj: Vec<(f64, f64)> = (0..50)
            .map(|k| {
                let t = k as f64 / 49.0;
                (t, 2.0 * t + 1e-6 * ((k * 7919 % 13) as f64 / 6.0 - 1.0))
            })
            .collect();
        let fit = wave_speed(&traj, 0.2).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-4);
    }

    #[test]
    fn too_few_samples() {
        let traj: Vec<(f64, f64)> = (0..11).map(|k| (k as f64, k as f64)).collect();
        assert!(matches!(wave_speed(&traj, 0.2), Err(Error::TooFewSamples { .. })));
    }

    #[test]
    fn jump_examples() {
        let v = flame_velocity_from_jump(0.0, 0.0, 1.3, 0.3).unwrap();
        assert_eq!(v.from_jump, 0.0);
        assert_eq!(v.kinematic, 0.0);
        assert_eq!(v.discrepancy, 0.0);
        let v = flame_velocity_from_jump(2.0, 1.0, 2.0, 1.0).unwrap();
        assert_eq!(v.from_jump, 1.0);
        assert_eq!(v.kinematic, 1.0);
        assert!(flame_velocity_from_jump(1.0, 1.0, 0.5, 0.5).is_err());
        assert_eq!(jump_front_speed(1.0, 2.0, 1.0), 2.0);
    }

    fn two_plateau_state(n: usize) -> (FlowState, Mesh1D) {
        let mesh = Mesh1D::uniform(0.0, 1.0, n).unwrap();
        let mut s = FlowState {
            t: 0.0,
            step: 0,
            rho: vec![0.0; n],
            rho_prev: vec![0.0; n],
            y: vec![[0.0; 4]; n],
            z: vec![0.5; n],
            theta: vec![0.0; n],
            u: vec![0.0; n + 1],
            flux: vec![0.0; n + 1],
            g: None,
        };
        for k in 0..n {
            let burnt = k < n / 2;
            s.rho[k] = if burnt { 0.3 } else { 1.2 };
            s.theta[k] = if burnt { 900.0 } else { 300.0 };
            s.y[k] = if burnt {
                [0.0, 0.0, 0.8, 0.2]
            } else {
                [0.4, 0.4, 0.0, 0.2]
            };
        }
        for j in 0..=n {
            s.u[j] = if j <= n / 2 { 0.0 } else { 0.05 };
        }
        s.rho_prev = s.rho.clone();
        (s, mesh)
    }

    #[test]
    fn synthetic_plateaus() {
        let (s, mesh) = two_plateau_state(100);
        let p = plateau_states(&s, &mesh, 0.5, 0.05, 0.2).unwrap();
        assert!((p.rho_b - 0.3).abs() < 1e-15);
        assert!((p.rho_u - 1.2).abs() < 1e-15);
        assert_eq!(p.u_b, 0.0);
        assert!((p.u_u - 0.05).abs() < 1e-15);
        assert!((p.theta_b - 900.0).abs() < 1e-12);
        assert!((p.y_b[P] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn non_flat_plateau_rejected() {
        let (mut s, mesh) = two_plateau_state(100);
        s.rho[10] = 0.31;
        assert!(matches!(
            plateau_states(&s, &mesh, 0.5, 0.05, 0.45),
            Err(Error::WaveNotSteady(_))
        ));
    }

    #[test]
    fn comparison_of_identical_profiles() {
        let p = uniform_profile((0..50).map(|k| (k as f64 / 49.0).powi(2)).collect());
        let c = compare_profiles(&p, &p, 0.5).unwrap();
        assert_eq!(c.linf, 0.0);
        assert_eq!(c.l2, 0.0);
        assert_eq!(c.thickness_ratio, 1.0);
    }

    fn ramp(x: f64, center: f64) -> f64 {
        ((x - center) / 0.1 + 0.5).clamp(0.0, 1.0)
    }

    #[test]
    fn shifted_profile_aligns() {
        let n = 200;
        let h = 1.0 / n as f64;
        let x: Vec<f64> = (0..n).map(|k| (k as f64 + 0.5) * h).collect();
        let a = Profile::new(x.clone(), x.iter().map(|&x| ramp(x, 0.4)).collect()).unwrap();
        let b = Profile::new(x.clone(), x.iter().map(|&x| ramp(x, 0.4 + 7.0 * h)).collect()).unwrap();
        let c = compare_profiles(&a, &b, 0.5).unwrap();
        assert!((c.shift + 7.0 * h).abs() < 1e-12);
        assert!(c.linf < 1e-12, "{}", c.linf);
        assert!((c.thickness_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn thickness_of_ramp() {
        let x: Vec<f64> = (0..=1000).map(|k| k as f64 / 1000.0).collect();
        let p = Profile::new(x.clone(), x.iter().map(|&x| ramp(x, 0.5)).collect()).unwrap();
        assert!((transition_thickness(&p).unwrap() - 0.08).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn jump_velocity_homogeneity(
            u_p in 0.01f64..10.0, u_u in 0.01f64..5.0, rho_u in 1.0f64..5.0,
            ratio in 1.5f64..10.0, scale in 0.1f64..10.0,
        ) {
            let rho_b = rho_u / ratio;
            let base = flame_velocity_from_jump(u_p, u_u, rho_u, rho_b).unwrap();
            let scaled = flame_velocity_from_jump(scale * u_p, scale * u_u, rho_u, rho_b).unwrap();
            prop_assert!((scaled.from_jump - scale * base.from_jump).abs() <= 1e-12 * scale * base.from_jump.abs());
            prop_assert!((scaled.kinematic - scale * base.kinematic).abs() <= 1e-12 * (1.0 + scale * base.kinematic.abs()));
            let dens = flame_velocity_from_jump(u_p, u_u, scale * rho_u, scale * rho_b).unwrap();
            prop_assert!((dens.from_jump - base.from_jump).abs() <= 1e-12 * base.from_jump.abs());
        }

        #[test]
        fn comparison_translation_invariant(shift in -0.2f64..0.2, offset in -0.05f64..0.05) {
            let n = 400;
            let x: Vec<f64> = (0..n).map(|k| (k as f64 + 0.5) / n as f64).collect();
            let a = Profile::new(x.clone(), x.iter().map(|&x| ramp(x, 0.5)).collect()).unwrap();
            let b = Profile::new(x.clone(), x.iter().map(|&x| ramp(x, 0.5 + offset).powf(1.3)).collect()).unwrap();
            let base = compare_profiles(&a, &b, 0.5).unwrap();
            let moved = compare_profiles(&a.shifted(shift), &b.shifted(shift), 0.5).unwrap();
            prop_assert!((base.linf - moved.linf).abs() < 1e-9);
            prop_assert!((base.l2 - moved.l2).abs() < 1e-9);
            let swapped = compare_profiles(&b, &a, 0.5).unwrap();
            prop_assert!((base.linf - swapped.linf).abs() < 0.02);
        }
    }
}
