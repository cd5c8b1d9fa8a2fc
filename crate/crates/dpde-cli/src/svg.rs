//! Renders trajectory snapshots as standalone SVG files. The radius profile
//! lives on [0, π]; the picture mirrors it across the horizontal axis to show
//! the full closed membrane, with the signal overlaid as r+s.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::HarnessError;
use crate::write_atomic;

/// One trajectory read back from its CSV artifact: snapshot times, the node
/// angles, and per-snapshot nodal values.
#[derive(Debug, Clone)]
pub struct TrajectoryData {
    pub times: Vec<f64>,
    pub thetas: Vec<f64>,
    pub r: Vec<Vec<f64>>,
    pub s: Vec<Vec<f64>>,
    /// Present when the file has the double-source header.
    pub s_right: Option<Vec<Vec<f64>>>,
}

/// Parses a trajectory CSV produced by the runner (either header form).
pub fn read_trajectory_csv(path: &Path) -> Result<TrajectoryData, HarnessError> {
    let text = fs::read_to_string(path)
        .map_err(|e| HarnessError::io(format!("reading {}", path.display()), e))?;
    let err = |line: usize, message: String| HarnessError::Config {
        path: path.display().to_string(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    let double = match lines.next() {
        Some((_, "t,theta,r,s")) => false,
        Some((_, "t,theta,r,s_L,s_R")) => true,
        _ => {
            return Err(err(
                1,
                "expected header 't,theta,r,s' or 't,theta,r,s_L,s_R'".into(),
            ))
        }
    };

    let mut data = TrajectoryData {
        times: Vec::new(),
        thetas: Vec::new(),
        r: Vec::new(),
        s: Vec::new(),
        s_right: double.then(Vec::new),
    };
    let mut first_block = true;
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let expected = if double { 5 } else { 4 };
        if fields.len() != expected {
            return Err(err(
                lineno,
                format!("expected {expected} columns, got {}", fields.len()),
            ));
        }
        let mut nums = [0.0_f64; 5];
        for (slot, raw) in nums.iter_mut().zip(&fields) {
            *slot = raw
                .parse()
                .map_err(|_| err(lineno, format!("bad number '{raw}'")))?;
        }
        let (t, theta) = (nums[0], nums[1]);
        let new_block = match data.times.last() {
            None => true,
            Some(&last) => t != last,
        };
        if new_block {
            if let Some(&last) = data.times.last() {
                if t < last {
                    return Err(err(lineno, "snapshot times must not decrease".into()));
                }
                first_block = false;
            }
            data.times.push(t);
            data.r.push(Vec::new());
            data.s.push(Vec::new());
            if let Some(sr) = &mut data.s_right {
                sr.push(Vec::new());
            }
        }
        if first_block {
            data.thetas.push(theta);
        }
        data.r.last_mut().unwrap().push(nums[2]);
        data.s.last_mut().unwrap().push(nums[3]);
        if let Some(sr) = &mut data.s_right {
            sr.last_mut().unwrap().push(nums[4]);
        }
    }
    if data.times.is_empty() {
        return Err(HarnessError::ConfigFile {
            path: path.display().to_string(),
            message: "no data rows".into(),
        });
    }
    let nodes = data.thetas.len();
    if data.r.iter().any(|block| block.len() != nodes) {
        return Err(HarnessError::ConfigFile {
            path: path.display().to_string(),
            message: "snapshots have differing node counts".into(),
        });
    }
    Ok(data)
}

/// Closed membrane outline: the profile rho(θ) on [0, π] mirrored to
/// [−π, π], sampled at the nodes, as SVG polygon points.
fn polygon_points(thetas: &[f64], rho: &[f64]) -> String {
    let mut points = String::new();
    let n = thetas.len();
    let mut push = |phi: f64, radius: f64| {
        let x = radius * phi.cos();
        let y = -radius * phi.sin();
        if !points.is_empty() {
            points.push(' ');
        }
        write!(points, "{x:.5},{y:.5}").expect("string write cannot fail");
    };
    for i in (0..n).rev() {
        push(-thetas[i], rho[i]);
    }
    for i in 1..n {
        push(thetas[i], rho[i]);
    }
    points
}

fn render_one(data: &TrajectoryData, k: usize, bound: f64) -> String {
    let t = data.times[k];
    let b = bound;
    let stroke = bound / 120.0;
    let font = bound / 9.0;
    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.5} {:.5} {:.5} {:.5}\">",
        -b,
        -b,
        2.0 * b,
        2.0 * b
    )
    .expect("string write cannot fail");
    writeln!(
        svg,
        "  <rect x=\"{:.5}\" y=\"{:.5}\" width=\"{:.5}\" height=\"{:.5}\" fill=\"white\"/>",
        -b,
        -b,
        2.0 * b,
        2.0 * b
    )
    .expect("string write cannot fail");

    let mut curve = |rho: &[f64], color: &str| {
        writeln!(
            svg,
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{stroke:.5}\"/>",
            polygon_points(&data.thetas, rho)
        )
        .expect("string write cannot fail");
    };
    let radius = &data.r[k];
    curve(radius, "#1f77b4");
    let overlay: Vec<f64> = radius
        .iter()
        .zip(&data.s[k])
        .map(|(&r, &s)| r + s)
        .collect();
    curve(&overlay, "#d62728");
    if let Some(s_right) = &data.s_right {
        let overlay_right: Vec<f64> = radius
            .iter()
            .zip(&s_right[k])
            .map(|(&r, &s)| r + s)
            .collect();
        curve(&overlay_right, "#2ca02c");
    }

    writeln!(
        svg,
        "  <text x=\"{:.5}\" y=\"{:.5}\" font-family=\"sans-serif\" font-size=\"{font:.5}\" fill=\"#333\">t = {t}</text>",
        -0.95 * b,
        -0.82 * b
    )
    .expect("string write cannot fail");
    svg.push_str("</svg>\n");
    svg
}

/// Renders one SVG per requested time from a trajectory CSV. Every requested
/// time must match a snapshot in the file to within 1e-9. All pictures from
/// one CSV share the same viewBox, sized to the largest curve in the file,
/// so a sequence of them animates without rescaling.
pub fn export_svg(
    csv_path: &Path,
    times: &[f64],
    out_dir: &Path,
) -> Result<Vec<PathBuf>, HarnessError> {
    if times.is_empty() {
        return Err(HarnessError::InvalidArgument(
            "no render times given".into(),
        ));
    }
    let data = read_trajectory_csv(csv_path)?;
    fs::create_dir_all(out_dir)
        .map_err(|e| HarnessError::io(format!("creating {}", out_dir.display()), e))?;

    let mut extent = 0.0_f64;
    for k in 0..data.times.len() {
        for i in 0..data.thetas.len() {
            let r = data.r[k][i];
            extent = extent.max(r.abs()).max((r + data.s[k][i]).abs());
            if let Some(sr) = &data.s_right {
                extent = extent.max((r + sr[k][i]).abs());
            }
        }
    }
    let bound = 1.05 * extent.max(f64::MIN_POSITIVE);

    let mut written = Vec::with_capacity(times.len());
    for &t in times {
        let k = data
            .times
            .iter()
            .position(|&snap| (snap - t).abs() <= 1e-9)
            .ok_or_else(|| HarnessError::MissingSnapshot {
                t,
                path: csv_path.display().to_string(),
            })?;
        let svg = render_one(&data, k, bound);
        let path = out_dir.join(format!("shape_t{}.svg", data.times[k]));
        write_atomic(&path, svg.as_bytes())?;
        written.push(path);
    }
    Ok(written)
}
