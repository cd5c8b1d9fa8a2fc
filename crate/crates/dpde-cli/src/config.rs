//! Flat key=value experiment configs, plus the CSV formats for nodal fields
//! (`theta,value`) and tabulated controls (`t,u`).
//!
//! A config names the simulation mode and boundary control and may override
//! the numerical defaults:
//!
//! ```text
//! # growing run under the constant control
//! mode = growing_single
//! control = u1
//! t_final = 8
//! ```
//!
//! Recognized keys: `mode` (growing_single | static_single | growing_double),
//! `n_cells`, `t_final`, `dt_safety`, `snapshot_every`, `r0`, `s0`
//! (`constant:<v>` or `csv:<path>`), `control` and `control_right`
//! (`u1` | `u2` | `u3` | `csv:<path>`). Unknown or repeated keys are errors.
//! Relative CSV paths resolve against the config file's directory.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use dpde::controls::{self, ControlSchedule, TabulatedControl};
use dpde::dynamics::{FieldSpec, SimConfig, SimMode};

use crate::error::HarnessError;

/// Everything a run needs: the simulation config and the boundary controls.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: SimConfig,
    pub control: ControlSchedule,
    pub control_right: Option<ControlSchedule>,
}

const KNOWN_KEYS: [&str; 9] = [
    "mode",
    "n_cells",
    "t_final",
    "dt_safety",
    "snapshot_every",
    "r0",
    "s0",
    "control",
    "control_right",
];

struct RawConfig {
    path: PathBuf,
    entries: Vec<(String, String, usize)>,
}

impl RawConfig {
    fn get(&self, key: &str) -> Option<(&str, usize)> {
        self.entries
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, line)| (v.as_str(), *line))
    }

    fn line_error(&self, line: usize, message: String) -> HarnessError {
        HarnessError::Config {
            path: self.path.display().to_string(),
            line,
            message,
        }
    }

    fn file_error(&self, message: String) -> HarnessError {
        HarnessError::ConfigFile {
            path: self.path.display().to_string(),
            message,
        }
    }

    fn parse_f64(&self, key: &str) -> Result<Option<f64>, HarnessError> {
        match self.get(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<f64>().map(Some).map_err(|_| {
                self.line_error(line, format!("key '{key}' needs a number, got '{v}'"))
            }),
        }
    }

    fn parse_usize(&self, key: &str) -> Result<Option<usize>, HarnessError> {
        match self.get(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<usize>().map(Some).map_err(|_| {
                self.line_error(line, format!("key '{key}' needs a non-negative integer, got '{v}'"))
            }),
        }
    }

    /// CSV paths inside the config resolve against its directory.
    fn resolve(&self, rel: &str) -> PathBuf {
        let p = Path::new(rel);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            match self.path.parent() {
                Some(dir) if !dir.as_os_str().is_empty() => dir.join(p),
                _ => p.to_path_buf(),
            }
        }
    }
}

fn split_lines(path: &Path, text: &str) -> Result<RawConfig, HarnessError> {
    let mut raw = RawConfig {
        path: path.to_path_buf(),
        entries: Vec::new(),
    };
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let stripped = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let stripped = stripped.trim();
        if stripped.is_empty() {
            continue;
        }
        let Some((key, value)) = stripped.split_once('=') else {
            return Err(raw.line_error(lineno, format!("expected key=value, got '{stripped}'")));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(raw.line_error(lineno, format!("unknown key '{key}'")));
        }
        if raw.entries.iter().any(|(k, _, _)| *k == key) {
            return Err(raw.line_error(lineno, format!("key '{key}' given twice")));
        }
        raw.entries.push((key, value, lineno));
    }
    Ok(raw)
}

fn parse_field_spec(raw: &RawConfig, key: &str, n_cells: usize) -> Result<Option<FieldSpec>, HarnessError> {
    let Some((value, line)) = raw.get(key) else {
        return Ok(None);
    };
    if let Some(v) = value.strip_prefix("constant:") {
        let c = v.trim().parse::<f64>().map_err(|_| {
            raw.line_error(line, format!("key '{key}': bad constant '{v}'"))
        })?;
        return Ok(Some(FieldSpec::Constant(c)));
    }
    if let Some(rel) = value.strip_prefix("csv:") {
        let path = raw.resolve(rel.trim());
        let values = read_field_csv(&path, n_cells)?;
        return Ok(Some(FieldSpec::Nodal(values)));
    }
    Err(raw.line_error(
        line,
        format!("key '{key}' takes constant:<value> or csv:<path>, got '{value}'"),
    ))
}

fn parse_control(
    raw: &RawConfig,
    key: &str,
    t_final: f64,
) -> Result<Option<ControlSchedule>, HarnessError> {
    let Some((value, line)) = raw.get(key) else {
        return Ok(None);
    };
    match value {
        "u1" => Ok(Some(controls::u1())),
        "u2" => Ok(Some(controls::u2())),
        "u3" => Ok(Some(controls::u3())),
        other => {
            if let Some(rel) = other.strip_prefix("csv:") {
                let path = raw.resolve(rel.trim());
                let table = load_control_csv(&path)?;
                let (first, last) = (table.times()[0], *table.times().last().unwrap());
                if first > 0.0 || last < t_final {
                    return Err(raw.line_error(
                        line,
                        format!(
                            "key '{key}': control table covers [{first}, {last}] but the run needs [0, {t_final}]"
                        ),
                    ));
                }
                Ok(Some(ControlSchedule::Tabulated(table)))
            } else {
                Err(raw.line_error(
                    line,
                    format!("key '{key}' takes u1, u2, u3 or csv:<path>, got '{other}'"),
                ))
            }
        }
    }
}

/// Parses an experiment config file. Defaults: `n_cells=100`, `t_final=8`,
/// `dt_safety=0.9`, `snapshot_every=0.5`, `r0=constant:1`, `s0=constant:0`;
/// `mode` and `control` are required.
pub fn parse_config(path: &Path) -> Result<Experiment, HarnessError> {
    let text = fs::read_to_string(path)
        .map_err(|e| HarnessError::io(format!("reading config {}", path.display()), e))?;
    parse_config_text(path, &text)
}

fn parse_config_text(path: &Path, text: &str) -> Result<Experiment, HarnessError> {
    let raw = split_lines(path, text)?;

    let mode = match raw.get("mode") {
        None => return Err(raw.file_error("missing required key 'mode'".into())),
        Some(("growing_single", _)) => SimMode::GrowingSingle,
        Some(("static_single", _)) => SimMode::StaticSingle,
        Some(("growing_double", _)) => SimMode::GrowingDouble,
        Some((other, line)) => {
            return Err(raw.line_error(
                line,
                format!(
                    "key 'mode' takes growing_single, static_single or growing_double, got '{other}'"
                ),
            ))
        }
    };
    let n_cells = raw.parse_usize("n_cells")?.unwrap_or(100);
    let t_final = raw.parse_f64("t_final")?.unwrap_or(8.0);
    let dt_safety = raw.parse_f64("dt_safety")?.unwrap_or(0.9);
    let snapshot_every = raw.parse_f64("snapshot_every")?.unwrap_or(0.5);
    let initial_r = parse_field_spec(&raw, "r0", n_cells)?.unwrap_or(FieldSpec::Constant(1.0));
    let initial_s = parse_field_spec(&raw, "s0", n_cells)?.unwrap_or(FieldSpec::Constant(0.0));

    let control = parse_control(&raw, "control", t_final)?
        .ok_or_else(|| raw.file_error("missing required key 'control'".into()))?;
    let control_right = parse_control(&raw, "control_right", t_final)?;
    match (mode, &control_right) {
        (SimMode::GrowingDouble, None) => {
            return Err(raw.file_error(
                "mode growing_double needs the key 'control_right'".into(),
            ))
        }
        (SimMode::GrowingDouble, Some(_)) => {}
        (_, Some(_)) => {
            let (_, line) = raw.get("control_right").unwrap();
            return Err(raw.line_error(
                line,
                "key 'control_right' only applies to mode growing_double".into(),
            ));
        }
        (_, None) => {}
    }

    Ok(Experiment {
        config: SimConfig {
            mode,
            n_cells,
            t_final,
            dt_safety,
            snapshot_every,
            initial_r,
            initial_s,
            initial_s_r: None,
        },
        control,
        control_right,
    })
}

/// Reads a `theta,value` CSV holding one value per grid node and checks the
/// angles against the uniform grid with `n_cells` cells.
pub fn read_field_csv(path: &Path, n_cells: usize) -> Result<Vec<f64>, HarnessError> {
    let rows = read_two_column_csv(path, "theta,value")?;
    let expected = n_cells + 1;
    if rows.len() != expected {
        return Err(HarnessError::ConfigFile {
            path: path.display().to_string(),
            message: format!(
                "field has {} rows but the grid has {} nodes",
                rows.len(),
                expected
            ),
        });
    }
    let h = PI / n_cells as f64;
    let mut values = Vec::with_capacity(expected);
    for (i, (theta, value, line)) in rows.into_iter().enumerate() {
        let expected_theta = if i == n_cells { PI } else { i as f64 * h };
        if (theta - expected_theta).abs() > 1e-9 {
            return Err(HarnessError::Config {
                path: path.display().to_string(),
                line,
                message: format!("theta {theta} does not match grid node {expected_theta}"),
            });
        }
        values.push(value);
    }
    Ok(values)
}

/// Reads a `t,u` CSV into a tabulated control.
pub fn load_control_csv(path: &Path) -> Result<TabulatedControl, HarnessError> {
    let rows = read_two_column_csv(path, "t,u")?;
    let (times, values) = rows.iter().map(|&(t, u, _)| (t, u)).unzip();
    TabulatedControl::new(times, values).map_err(|e| HarnessError::ConfigFile {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Writes a tabulated control as a `t,u` CSV. The shortest round-trip
/// decimal form is used, so reloading reproduces the knots exactly.
pub fn write_control_csv(path: &Path, table: &TabulatedControl) -> Result<(), HarnessError> {
    let mut out = String::from("t,u\n");
    for (t, u) in table.times().iter().zip(table.values()) {
        writeln!(out, "{t},{u}").expect("string write cannot fail");
    }
    crate::write_atomic(path, out.as_bytes())
}

fn read_two_column_csv(
    path: &Path,
    header: &str,
) -> Result<Vec<(f64, f64, usize)>, HarnessError> {
    let text = fs::read_to_string(path)
        .map_err(|e| HarnessError::io(format!("reading {}", path.display()), e))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first.trim() == header => {}
        _ => {
            return Err(HarnessError::Config {
                path: path.display().to_string(),
                line: 1,
                message: format!("expected header '{header}'"),
            })
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let Some((a, b)) = trimmed.split_once(',') else {
            return Err(HarnessError::Config {
                path: path.display().to_string(),
                line: lineno,
                message: format!("expected two comma-separated numbers, got '{trimmed}'"),
            });
        };
        let parse = |s: &str| -> Result<f64, HarnessError> {
            s.trim().parse::<f64>().map_err(|_| HarnessError::Config {
                path: path.display().to_string(),
                line: lineno,
                message: format!("bad number '{}'", s.trim()),
            })
        };
        rows.push((parse(a)?, parse(b)?, lineno));
    }
    if rows.is_empty() {
        return Err(HarnessError::ConfigFile {
            path: path.display().to_string(),
            message: "no data rows".into(),
        });
    }
    Ok(rows)
}
