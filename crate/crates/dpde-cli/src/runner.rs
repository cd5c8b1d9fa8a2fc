//! Runs one experiment and writes its artifacts: a trajectory CSV with one
//! row per (snapshot, node) and a key=value summary of the final membrane.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use dpde::dynamics::{simulate, SimMode, Trajectory};
use dpde::equilibria::shape_ratio;

use crate::config::{parse_config, Experiment};
use crate::error::HarnessError;
use crate::presets::{preset, PRESET_NAMES};
use crate::write_atomic;

/// Paths and summary metrics produced by [`run_experiment`].
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub trajectory_csv: PathBuf,
    pub summary_file: PathBuf,
    pub summary: Vec<(&'static str, f64)>,
}

impl RunArtifacts {
    pub fn metric(&self, key: &str) -> Option<f64> {
        self.summary.iter().find(|(k, _)| *k == key).map(|&(_, v)| v)
    }
}

/// Resolves `source` as a preset name first, then as a config file path.
/// Returns the experiment and the stem used to name output files.
pub fn resolve_experiment(source: &str) -> Result<(Experiment, String), HarnessError> {
    if PRESET_NAMES.contains(&source) {
        return Ok((preset(source)?, source.to_string()));
    }
    let path = Path::new(source);
    if path.is_file() {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "experiment".to_string());
        return Ok((parse_config(path)?, stem));
    }
    Err(HarnessError::UnknownSource(source.to_string()))
}

/// Simulates `source` (preset name or config path) and writes
/// `<stem>_trajectory.csv` and `<stem>_summary.txt` into `out_dir`.
pub fn run_experiment(source: &str, out_dir: &Path) -> Result<RunArtifacts, HarnessError> {
    let (experiment, stem) = resolve_experiment(source)?;
    let traj = simulate(
        &experiment.config,
        &experiment.control,
        experiment.control_right.as_ref(),
    )?;
    fs::create_dir_all(out_dir)
        .map_err(|e| HarnessError::io(format!("creating {}", out_dir.display()), e))?;

    let trajectory_csv = out_dir.join(format!("{stem}_trajectory.csv"));
    write_trajectory_csv(&traj, &trajectory_csv)?;

    let summary = summarize(&traj)?;
    let summary_file = out_dir.join(format!("{stem}_summary.txt"));
    let mut text = String::new();
    for (key, value) in &summary {
        writeln!(text, "{key}={value}").expect("string write cannot fail");
    }
    write_atomic(&summary_file, text.as_bytes())?;

    Ok(RunArtifacts {
        trajectory_csv,
        summary_file,
        summary,
    })
}

/// Writes the snapshots as CSV, rows ordered by (t, theta). Header is
/// `t,theta,r,s` for single-signal runs and `t,theta,r,s_L,s_R` for
/// double-source runs. Numbers use the shortest decimal form that parses
/// back to the same bits.
pub fn write_trajectory_csv(traj: &Trajectory, path: &Path) -> Result<(), HarnessError> {
    let double = traj.config().mode == SimMode::GrowingDouble;
    let mut out = String::from(if double {
        "t,theta,r,s_L,s_R\n"
    } else {
        "t,theta,r,s\n"
    });
    for snap in traj.snapshots() {
        let thetas = snap.r.grid().thetas();
        let r = snap.r.values();
        let s = snap.s.values();
        let s_r = snap.s_r.as_ref().map(|f| f.values());
        for (i, &theta) in thetas.iter().enumerate() {
            match s_r {
                Some(sr) => writeln!(out, "{},{},{},{},{}", snap.t, theta, r[i], s[i], sr[i]),
                None => writeln!(out, "{},{},{},{}", snap.t, theta, r[i], s[i]),
            }
            .expect("string write cannot fail");
        }
    }
    write_atomic(path, out.as_bytes())
}

/// Final-state metrics: radius extremes, the radius at the two poles and the
/// equator, the shape-ratio variation over the second half of the run, and
/// the terminal L² norm of each signal.
pub fn summarize(traj: &Trajectory) -> Result<Vec<(&'static str, f64)>, HarnessError> {
    let fin = traj.final_state();
    let r = fin.r.values();
    let min = r.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let t_final = traj.config().t_final;
    let variation = shape_ratio(traj)?
        .variation(t_final / 2.0, t_final)
        .expect("the final snapshot is inside the window");
    let mut summary = vec![
        ("final_min_radius", min),
        ("final_max_radius", max),
        ("r_at_0", r[0]),
        ("r_at_half_pi", fin.r.value_at(FRAC_PI_2)),
        ("r_at_pi", r[r.len() - 1]),
        ("shape_ratio_variation", variation),
        ("signal_terminal_l2", fin.s.l2_norm()),
    ];
    if let Some(s_r) = &fin.s_r {
        summary.push(("signal_right_terminal_l2", s_r.l2_norm()));
    }
    Ok(summary)
}
