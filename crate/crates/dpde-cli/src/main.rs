//! `dpde`: run growth experiments, plan boundary controls, and render the
//! resulting membranes.

use std::error::Error as _;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use dpde::controls::{eval_schedule, ControlSchedule, TabulatedControl};
use dpde::dynamics::{simulate, FieldSpec, SimConfig, SimMode};
use dpde::equilibria::{
    constant_equilibrium, equilibrium_residual, exponential_equilibrium, EquilibriumProfile,
};
use dpde::geometry::{make_grid, Field};
use dpde::planner::{flatness_control, optimize_control, CostWeights};

use dpde_cli::config::{load_control_csv, read_field_csv, write_control_csv};
use dpde_cli::convergence::convergence_study;
use dpde_cli::error::HarnessError;
use dpde_cli::runner::run_experiment;
use dpde_cli::svg::export_svg;

#[derive(Parser)]
#[command(
    name = "dpde",
    version,
    about = "Growth of a membrane driven by a diffusing boundary-controlled signal"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or config file; writes a trajectory CSV and a summary.
    Simulate {
        /// Preset name (fig2_growing_const, fig_static_const, fig4_apple,
        /// fig5_circle, fig6_double) or path to a config file.
        source: String,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Plan a boundary control that settles the signal on a constant value,
    /// using the flat series parametrization; writes the control as CSV.
    PlanFlat {
        /// Signal value to settle on.
        #[arg(long, default_value_t = 1.0)]
        target: f64,
        /// Transition duration.
        #[arg(long, default_value_t = 5.0)]
        horizon: f64,
        /// Series truncation order.
        #[arg(long, default_value_t = 12)]
        truncation: usize,
        /// Gevrey regularity of the step (between 1 and 3, exclusive ends).
        #[arg(long, default_value_t = 1.65)]
        sigma: f64,
        /// Number of tabulated control samples.
        #[arg(long, default_value_t = 501)]
        samples: usize,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Fit a knotted boundary control so the final radius matches a target
    /// profile; writes the fitted control as CSV plus a report.
    PlanOpt {
        /// Target radius profile as a theta,value CSV on the run grid.
        #[arg(long, conflicts_with = "reference_control")]
        target_csv: Option<PathBuf>,
        /// Generate the target by simulating this control first
        /// (u1 | u2 | u3 | a t,u CSV path).
        #[arg(long)]
        reference_control: Option<String>,
        #[arg(long, default_value_t = 10.0)]
        horizon: f64,
        #[arg(long, default_value_t = 20)]
        knots: usize,
        #[arg(long, default_value_t = 100)]
        n_cells: usize,
        #[arg(long, default_value_t = 100.0)]
        w_shape: f64,
        #[arg(long, default_value_t = 1.0)]
        w_signal: f64,
        #[arg(long, default_value_t = 1e-5)]
        w_reg: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Evaluate steady signal profiles and their diagnostics.
    Equilibria {
        /// Boundary value of the steady signal.
        #[arg(long, default_value_t = 1.0)]
        u_e: f64,
        /// Also evaluate the exponential profile with this rate.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 100)]
        n_cells: usize,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Re-run an experiment on a ladder of grids and report refinement
    /// orders of the final radius.
    Converge {
        /// Preset name or config file path.
        source: String,
        /// Comma-separated cell counts, each double the previous.
        #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
        levels: Vec<usize>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Render snapshots of a trajectory CSV as SVG membranes.
    Render {
        /// Trajectory CSV written by `simulate`.
        trajectory: PathBuf,
        /// Comma-separated snapshot times to draw.
        #[arg(long, value_delimiter = ',', required = true)]
        times: Vec<f64>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli.command) {
        eprintln!("error: {err}");
        let mut source = err.source();
        while let Some(cause) = source {
            eprintln!("  caused by: {cause}");
            source = cause.source();
        }
        std::process::exit(err.exit_code());
    }
}

fn ensure_out_dir(out_dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(out_dir)
        .map_err(|e| HarnessError::io(format!("creating {}", out_dir.display()), e))
}

fn write_report(path: &Path, lines: &[(&str, String)]) -> Result<(), HarnessError> {
    let mut text = String::new();
    for (key, value) in lines {
        writeln!(text, "{key}={value}").expect("string write cannot fail");
    }
    dpde_cli::write_atomic(path, text.as_bytes())
}

fn run(command: Command) -> Result<(), HarnessError> {
    match command {
        Command::Simulate { source, out_dir } => {
            let artifacts = run_experiment(&source, &out_dir)?;
            for (key, value) in &artifacts.summary {
                println!("{key}={value}");
            }
            println!("trajectory: {}", artifacts.trajectory_csv.display());
            println!("summary: {}", artifacts.summary_file.display());
            Ok(())
        }
        Command::PlanFlat {
            target,
            horizon,
            truncation,
            sigma,
            samples,
            out_dir,
        } => {
            let plan = flatness_control(target, horizon, truncation, sigma, samples)?;
            ensure_out_dir(&out_dir)?;
            let csv_path = out_dir.join("flat_control.csv");
            match &plan.control {
                ControlSchedule::Tabulated(table) => write_control_csv(&csv_path, table)?,
                other => unreachable!("flat plans tabulate their control, got {other:?}"),
            }
            let u0 = eval_schedule(&plan.control, 0.0)?;
            let u_end = eval_schedule(&plan.control, horizon)?;
            let report_path = out_dir.join("flat_report.txt");
            write_report(
                &report_path,
                &[
                    ("target", format!("{}", plan.target_value)),
                    ("horizon", format!("{}", plan.horizon)),
                    ("truncation", format!("{}", plan.truncation)),
                    ("sigma", format!("{}", plan.sigma)),
                    ("control_at_0", format!("{u0}")),
                    ("control_at_horizon", format!("{u_end}")),
                ],
            )?;
            println!("control: {}", csv_path.display());
            println!("report: {}", report_path.display());
            Ok(())
        }
        Command::PlanOpt {
            target_csv,
            reference_control,
            horizon,
            knots,
            n_cells,
            w_shape,
            w_signal,
            w_reg,
            tol,
            max_iters,
            out_dir,
        } => {
            let grid = make_grid(n_cells)?;
            let r1 = match (target_csv, reference_control) {
                (Some(path), None) => {
                    Field::new(grid.clone(), read_field_csv(&path, n_cells)?)
                }
                (None, Some(name)) => {
                    let control = named_or_csv_control(&name, horizon)?;
                    let config = SimConfig {
                        mode: SimMode::GrowingSingle,
                        n_cells,
                        t_final: horizon,
                        dt_safety: 0.9,
                        snapshot_every: horizon,
                        initial_r: FieldSpec::Constant(1.0),
                        initial_s: FieldSpec::Constant(0.0),
                        initial_s_r: None,
                    };
                    let traj = simulate(&config, &control, None)?;
                    traj.final_state().r.clone()
                }
                _ => {
                    return Err(HarnessError::InvalidArgument(
                        "give exactly one of --target-csv or --reference-control".into(),
                    ))
                }
            };
            let r0 = Field::constant(grid, 1.0);
            let weights = CostWeights {
                shape: w_shape,
                signal: w_signal,
                reg: w_reg,
            };
            let report = optimize_control(&r0, &r1, horizon, knots, weights, tol, max_iters)?;
            ensure_out_dir(&out_dir)?;
            let csv_path = out_dir.join("opt_control.csv");
            match &report.schedule {
                ControlSchedule::Tabulated(table) => write_control_csv(&csv_path, table)?,
                other => unreachable!("fitted plans tabulate their control, got {other:?}"),
            }
            let report_path = out_dir.join("opt_report.txt");
            let history = report
                .cost_history
                .iter()
                .map(|c| format!("{c:e}"))
                .collect::<Vec<_>>()
                .join(",");
            write_report(
                &report_path,
                &[
                    ("iterations", format!("{}", report.iterations)),
                    (
                        "terminal_shape_error",
                        format!("{}", report.terminal_shape_error),
                    ),
                    (
                        "terminal_signal_error",
                        format!("{}", report.terminal_signal_error),
                    ),
                    ("cost_history", history),
                ],
            )?;
            println!("iterations={}", report.iterations);
            println!("terminal_shape_error={}", report.terminal_shape_error);
            println!("terminal_signal_error={}", report.terminal_signal_error);
            println!("control: {}", csv_path.display());
            println!("report: {}", report_path.display());
            Ok(())
        }
        Command::Equilibria {
            u_e,
            lambda,
            n_cells,
            out_dir,
        } => {
            let grid = make_grid(n_cells)?;
            ensure_out_dir(&out_dir)?;
            let mut lines: Vec<(&str, String)> = Vec::new();

            let constant = constant_equilibrium(u_e, &grid);
            lines.push(("constant_u_e", format!("{u_e}")));
            lines.push((
                "constant_residual_max",
                format!("{}", equilibrium_residual(&constant.s_e).max_norm()),
            ));
            lines.push((
                "constant_neumann_defect",
                format!("{}", constant.neumann_defect()),
            ));

            if let Some(lambda) = lambda {
                let profile = exponential_equilibrium(u_e, lambda, &grid)?;
                lines.push(("exponential_lambda", format!("{lambda}")));
                lines.push((
                    "exponential_residual_max",
                    format!("{}", equilibrium_residual(&profile.s_e).max_norm()),
                ));
                lines.push((
                    "exponential_neumann_defect",
                    format!("{}", profile.neumann_defect()),
                ));
                write_profile_csv(&out_dir.join("equilibrium_profile.csv"), &profile)?;
            }

            let report_path = out_dir.join("equilibria.txt");
            write_report(&report_path, &lines)?;
            for (key, value) in &lines {
                println!("{key}={value}");
            }
            println!("report: {}", report_path.display());
            Ok(())
        }
        Command::Converge {
            source,
            levels,
            out_dir,
        } => {
            let table = convergence_study(&source, &levels)?;
            ensure_out_dir(&out_dir)?;
            let path = out_dir.join("convergence.txt");
            dpde_cli::write_atomic(&path, table.to_string().as_bytes())?;
            print!("{table}");
            println!("table: {}", path.display());
            Ok(())
        }
        Command::Render {
            trajectory,
            times,
            out_dir,
        } => {
            let files = export_svg(&trajectory, &times, &out_dir)?;
            for file in files {
                println!("rendered: {}", file.display());
            }
            Ok(())
        }
    }
}

fn named_or_csv_control(name: &str, t_final: f64) -> Result<ControlSchedule, HarnessError> {
    match name {
        "u1" => Ok(dpde::controls::u1()),
        "u2" => Ok(dpde::controls::u2()),
        "u3" => Ok(dpde::controls::u3()),
        path => {
            let table: TabulatedControl = load_control_csv(Path::new(path))?;
            let (first, last) = (table.times()[0], *table.times().last().unwrap());
            if first > 0.0 || last < t_final {
                return Err(HarnessError::InvalidArgument(format!(
                    "control table covers [{first}, {last}] but the run needs [0, {t_final}]"
                )));
            }
            Ok(ControlSchedule::Tabulated(table))
        }
    }
}

fn write_profile_csv(path: &Path, profile: &EquilibriumProfile) -> Result<(), HarnessError> {
    let mut text = String::from("theta,s_e\n");
    for (&theta, &value) in profile
        .s_e
        .grid()
        .thetas()
        .iter()
        .zip(profile.s_e.values())
    {
        writeln!(text, "{theta},{value}").expect("string write cannot fail");
    }
    dpde_cli::write_atomic(path, text.as_bytes())
}
