//! Boundary-control planning: an exact flatness parametrization of the
//! unit-coefficient diffusion problem, and a damped least-squares planner
//! that steers the coupled nonlinear system toward a target radius profile.

use std::f64::consts::PI;
use std::sync::Arc;
use thiserror::Error;

use crate::controls::{
    gevrey_jet, ControlError, ControlSchedule, FlatSeriesControl, GevreyStep, TabulatedControl,
};
use crate::dynamics::{simulate, FieldSpec, SimConfig, SimError, SimMode, Trajectory};
use crate::geometry::{Field, GeometryError, Grid};

#[derive(Debug, Error, PartialEq)]
pub enum PlanError {
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("flat series tail {max_tail:.3e} exceeds {limit:.3e}: raise the truncation order or lower sigma")]
    SeriesDivergence { max_tail: f64, limit: f64 },
    #[error("inner simulation failed: {source}")]
    SimulationFailure { source: SimError, knots: Vec<f64> },
    #[error("no descent direction found; the iterate is already a local minimum")]
    NoDescent,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Control(#[from] ControlError),
}

/// The boundary-controlled diffusion problem s_t = f·s_θθ + g·s_θ + h·s.
/// Only the unit instance (f ≡ 1, g ≡ h ≡ 0) is served by the flatness
/// parametrization; the general coefficients are carried for bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedHeatProblem {
    f: Field,
    g: Field,
    h: Field,
}

impl GeneralizedHeatProblem {
    pub fn new(f: Field, g: Field, h: Field) -> Result<Self, PlanError> {
        f.same_grid(&g)?;
        f.same_grid(&h)?;
        if let Some((i, &v)) = f.values().iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
            return Err(PlanError::InvalidPlan(format!(
                "diffusion coefficient must be positive everywhere, got {v} at node {i}"
            )));
        }
        Ok(GeneralizedHeatProblem { f, g, h })
    }

    pub fn unit(grid: &Arc<Grid>) -> Self {
        GeneralizedHeatProblem {
            f: Field::constant(grid.clone(), 1.0),
            g: Field::constant(grid.clone(), 0.0),
            h: Field::constant(grid.clone(), 0.0),
        }
    }

    pub fn f(&self) -> &Field {
        &self.f
    }

    pub fn g(&self) -> &Field {
        &self.g
    }

    pub fn h(&self) -> &Field {
        &self.h
    }

    pub fn is_unit(&self) -> bool {
        self.f.values().iter().all(|&v| v == 1.0)
            && self.g.values().iter().all(|&v| v == 0.0)
            && self.h.values().iter().all(|&v| v == 0.0)
    }
}

/// Output of the flatness parametrization: the series data plus the control
/// u(t) = φ(t, π) tabulated on a fine time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatPlan {
    pub target_value: f64,
    pub horizon: f64,
    pub truncation: usize,
    pub sigma: f64,
    pub series: FlatSeriesControl,
    pub control: ControlSchedule,
}

/// Σ_{k=0}^{K} y^{(k)}·θ^{2k}/(2k)! — the even power series whose odd-order
/// θ-derivatives vanish at 0 termwise.
fn series_sum(jet: &crate::controls::jet::Jet, theta: f64, truncation: usize) -> f64 {
    let mut sum = 0.0;
    let mut theta_pow = 1.0;
    let mut fact = 1.0;
    for k in 0..=truncation {
        if k > 0 {
            theta_pow *= theta * theta;
            fact *= (2 * k - 1) as f64 * (2 * k) as f64;
        }
        sum += jet.derivative(k) * theta_pow / fact;
    }
    sum
}

/// Steers the unit diffusion problem from s ≡ 0 to s ≡ c over [0, T] by the
/// flat output c·y(t) with y a Gevrey step: the control is the boundary
/// trace of the parametrized series.
pub fn flatness_control(
    c: f64,
    horizon: f64,
    truncation: usize,
    sigma: f64,
    samples: usize,
) -> Result<FlatPlan, PlanError> {
    if truncation < 4 {
        return Err(PlanError::InvalidPlan(format!(
            "truncation order must be at least 4, got {truncation}"
        )));
    }
    if samples < 2 {
        return Err(PlanError::InvalidPlan(format!(
            "need at least 2 control samples, got {samples}"
        )));
    }
    if !(horizon > 0.0) {
        return Err(PlanError::InvalidPlan(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    let step = GevreyStep::new(sigma, horizon, truncation)?;
    let tail_weight = PI.powi(2 * truncation as i32) / double_factorial_like(truncation);
    let mut times = Vec::with_capacity(samples);
    let mut values = Vec::with_capacity(samples);
    let mut max_tail = 0.0_f64;
    for i in 0..samples {
        let t = horizon * i as f64 / (samples - 1) as f64;
        let jet = gevrey_jet(&step, t)?;
        max_tail = max_tail.max(c.abs() * jet.derivative(truncation).abs() * tail_weight);
        times.push(t);
        values.push(c * series_sum(&jet, PI, truncation));
    }
    let limit = 1e-3 * c.abs();
    if c != 0.0 && max_tail > limit {
        return Err(PlanError::SeriesDivergence { max_tail, limit });
    }
    let control = ControlSchedule::Tabulated(TabulatedControl::new(times, values)?);
    Ok(FlatPlan {
        target_value: c,
        horizon,
        truncation,
        sigma,
        series: FlatSeriesControl { target: c, step },
        control,
    })
}

/// (2K)! computed incrementally, named for what it weights: the series term
/// θ^{2K}/(2K)! at the truncation order.
fn double_factorial_like(truncation: usize) -> f64 {
    let mut fact = 1.0;
    for k in 1..=truncation {
        fact *= (2 * k - 1) as f64 * (2 * k) as f64;
    }
    fact
}

/// The parametrized signal field φ(t,·) of a flat plan.
pub fn flatness_field(plan: &FlatPlan, t: f64, grid: &Arc<Grid>) -> Result<Field, PlanError> {
    if !(0.0..=plan.horizon).contains(&t) {
        return Err(PlanError::InvalidPlan(format!(
            "time {t} outside the plan horizon [0, {}]",
            plan.horizon
        )));
    }
    let jet = gevrey_jet(&plan.series.step, t)?;
    let c = plan.target_value;
    let truncation = plan.truncation;
    Ok(Field::from_fn(grid.clone(), |theta| {
        c * series_sum(&jet, theta, truncation)
    }))
}

/// Weights of the terminal-cost terms: shape tracks r(T) to the target,
/// signal penalizes leftover s(T), reg regularizes the control table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostWeights {
    pub shape: f64,
    pub signal: f64,
    pub reg: f64,
}

impl Default for CostWeights {
    fn default() -> Self {
        CostWeights {
            shape: 1.0,
            signal: 1.0,
            reg: 1e-4,
        }
    }
}

/// Outcome of a planning run.
#[derive(Debug, Clone)]
pub struct PlanReport {
    pub iterations: usize,
    /// Cost at the initial iterate followed by each accepted step; never
    /// increasing.
    pub cost_history: Vec<f64>,
    /// Unweighted L² norm of r(T) − r₁ at the final iterate.
    pub terminal_shape_error: f64,
    /// Unweighted L² norm of s(T) at the final iterate.
    pub terminal_signal_error: f64,
    pub schedule: ControlSchedule,
}

struct Evaluation {
    residual: Vec<f64>,
    cost: f64,
    shape_error: f64,
    signal_error: f64,
}

struct InnerProblem<'a> {
    base: SimConfig,
    knot_times: Vec<f64>,
    r1: &'a Field,
    weights: CostWeights,
}

impl InnerProblem<'_> {
    /// Simulates the coupled system under the knot vector and packs the
    /// weighted least-squares residual [shape; signal; reg].
    fn evaluate(&self, q: &[f64]) -> Result<Evaluation, PlanError> {
        let fail = |source: SimError| PlanError::SimulationFailure {
            source,
            knots: q.to_vec(),
        };
        let table =
            TabulatedControl::new(self.knot_times.clone(), q.to_vec()).map_err(PlanError::Control)?;
        let traj = simulate(&self.base, &ControlSchedule::Tabulated(table), None).map_err(fail)?;
        let end = traj.final_state();
        let grid = end.r.grid();
        let n = grid.n_cells();
        let h = grid.dtheta();
        let dt_knot = self.knot_times[1] - self.knot_times[0];
        let mut residual = Vec::with_capacity(2 * (n + 1) + q.len());
        let (mut shape_sq, mut signal_sq) = (0.0, 0.0);
        for i in 0..=n {
            let tw = if i == 0 || i == n { 0.5 } else { 1.0 };
            let dr = end.r.values()[i] - self.r1.values()[i];
            let s = end.s.values()[i];
            residual.push((self.weights.shape * tw * h).sqrt() * dr);
            shape_sq += tw * h * dr * dr;
            signal_sq += tw * h * s * s;
        }
        for i in 0..=n {
            let tw = if i == 0 || i == n { 0.5 } else { 1.0 };
            residual.push((self.weights.signal * tw * h).sqrt() * end.s.values()[i]);
        }
        for (j, &qj) in q.iter().enumerate() {
            let tw = if j == 0 || j == q.len() - 1 { 0.5 } else { 1.0 };
            residual.push((self.weights.reg * tw * dt_knot).sqrt() * qj);
        }
        let cost = residual.iter().map(|r| r * r).sum();
        Ok(Evaluation {
            residual,
            cost,
            shape_error: shape_sq.sqrt(),
            signal_error: signal_sq.sqrt(),
        })
    }
}

/// Solves A x = b for symmetric positive definite A; `None` when a pivot
/// fails, which the caller treats as "increase the damping".
fn cholesky_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                if !(sum > 0.0) {
                    return None;
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i][k] * y[k];
        }
        y[i] = sum / l[i][i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = y[i];
        for k in i + 1..n {
            sum -= l[k][i] * x[k];
        }
        x[i] = sum / l[i][i];
    }
    Some(x)
}

const FD_STEP: f64 = 1e-6;
const DAMPING_INIT: f64 = 1e-3;
const DAMPING_SHRINK: f64 = 0.3;
const DAMPING_GROW: f64 = 10.0;
const DAMPING_CAP: f64 = 1e12;

/// Plans a boundary control steering the growing single-source system from
/// r0 (with zero signal) to the target radius r1 at time T. The control is
/// parametrized by `knots` values on a uniform time grid; the residual
/// gradient comes from forward finite differences on the knots (one extra
/// simulation each), and steps are damped least-squares directions whose
/// damping plays the role of a backtracking line search: accepted steps must
/// strictly decrease the cost, otherwise the damping grows and the step
/// shrinks toward the gradient direction.
pub fn optimize_control(
    r0: &Field,
    r1: &Field,
    horizon: f64,
    knots: usize,
    weights: CostWeights,
    tol: f64,
    max_iters: usize,
) -> Result<PlanReport, PlanError> {
    r0.same_grid(r1)?;
    r0.ensure_positive()?;
    r1.ensure_positive()?;
    if knots < 4 {
        return Err(PlanError::InvalidPlan(format!(
            "need at least 4 knots, got {knots}"
        )));
    }
    if !(horizon > 0.0) {
        return Err(PlanError::InvalidPlan(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    if !(weights.shape > 0.0) || weights.signal < 0.0 || weights.reg < 0.0 {
        return Err(PlanError::InvalidPlan(
            "weights need shape > 0 and signal, reg >= 0".into(),
        ));
    }
    if !(tol > 0.0) || max_iters == 0 {
        return Err(PlanError::InvalidPlan(
            "tolerance must be positive and max_iters nonzero".into(),
        ));
    }
    let problem = InnerProblem {
        base: SimConfig {
            mode: SimMode::GrowingSingle,
            n_cells: r0.grid().n_cells(),
            t_final: horizon,
            dt_safety: 0.9,
            snapshot_every: horizon,
            initial_r: FieldSpec::Nodal(r0.values().to_vec()),
            initial_s: FieldSpec::Constant(0.0),
            initial_s_r: None,
        },
        knot_times: (0..knots)
            .map(|j| horizon * j as f64 / (knots - 1) as f64)
            .collect(),
        r1,
        weights,
    };

    let mut q = vec![0.0; knots];
    let mut current = problem.evaluate(&q)?;
    let mut cost_history = vec![current.cost];
    let mut iterations = 0;
    let mut damping = DAMPING_INIT;

    while current.cost > tol * tol && iterations < max_iters {
        // Jacobian of the residual by forward differences, one column per knot
        let m = current.residual.len();
        let mut jac: Vec<Vec<f64>> = Vec::with_capacity(knots);
        for j in 0..knots {
            let mut probe = q.clone();
            probe[j] += FD_STEP;
            let shifted = problem.evaluate(&probe)?;
            jac.push(
                shifted
                    .residual
                    .iter()
                    .zip(&current.residual)
                    .map(|(a, b)| (a - b) / FD_STEP)
                    .collect(),
            );
        }
        let grad: Vec<f64> = jac
            .iter()
            .map(|col| 2.0 * col.iter().zip(&current.residual).map(|(a, b)| a * b).sum::<f64>())
            .collect();
        let grad_norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if grad_norm <= tol {
            break;
        }
        let mut normal = vec![vec![0.0; knots]; knots];
        for a in 0..knots {
            for b in 0..=a {
                let dot: f64 = (0..m).map(|i| jac[a][i] * jac[b][i]).sum();
                normal[a][b] = dot;
                normal[b][a] = dot;
            }
        }
        let rhs: Vec<f64> = grad.iter().map(|g| -0.5 * g).collect();

        let mut accepted = false;
        while damping <= DAMPING_CAP {
            let mut damped = normal.clone();
            for (d, row) in damped.iter_mut().enumerate() {
                row[d] += damping;
            }
            if let Some(delta) = cholesky_solve(&damped, &rhs) {
                let trial_q: Vec<f64> = q.iter().zip(&delta).map(|(a, b)| a + b).collect();
                match problem.evaluate(&trial_q) {
                    Ok(trial) if trial.cost < current.cost => {
                        q = trial_q;
                        current = trial;
                        cost_history.push(current.cost);
                        iterations += 1;
                        damping = (damping * DAMPING_SHRINK).max(1e-12);
                        accepted = true;
                        break;
                    }
                    // a worse trial, a degenerate simulation, or a failed
                    // factorization all mean the same thing: shrink the step
                    Ok(_) | Err(PlanError::SimulationFailure { .. }) => {}
                    Err(other) => return Err(other),
                }
            }
            damping *= DAMPING_GROW;
        }
        if !accepted {
            if iterations == 0 {
                return Err(PlanError::NoDescent);
            }
            break;
        }
    }

    let table = TabulatedControl::new(problem.knot_times.clone(), q).map_err(PlanError::Control)?;
    Ok(PlanReport {
        iterations,
        cost_history,
        terminal_shape_error: current.shape_error,
        terminal_signal_error: current.signal_error,
        schedule: ControlSchedule::Tabulated(table),
    })
}

/// Worst-case L²(0,π) distance between a run's radius and a time-indexed
/// reference, over the recorded snapshots.
pub fn tracking_error(
    traj: &Trajectory,
    reference: impl Fn(f64) -> Field,
) -> Result<f64, PlanError> {
    let mut worst = 0.0_f64;
    for snap in traj.snapshots() {
        let target = reference(snap.t);
        snap.r.same_grid(&target)?;
        let diff = Field::new(
            snap.r.grid().clone(),
            snap.r
                .values()
                .iter()
                .zip(target.values())
                .map(|(a, b)| a - b)
                .collect(),
        );
        worst = worst.max(diff.l2_norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controls::eval_schedule;
    use crate::dynamics::simulate;
    use crate::geometry::make_grid;

    #[test]
    fn heat_problem_validates_diffusion_coefficient() {
        let grid = make_grid(16).unwrap();
        let unit = GeneralizedHeatProblem::unit(&grid);
        assert!(unit.is_unit());
        assert_eq!(unit.f().values()[3], 1.0);
        let bad = GeneralizedHeatProblem::new(
            Field::constant(grid.clone(), 0.0),
            Field::constant(grid.clone(), 0.0),
            Field::constant(grid, 0.0),
        );
        assert!(matches!(bad, Err(PlanError::InvalidPlan(_))));
    }

    #[test]
    fn flat_control_hits_both_endpoints_exactly() {
        let plan = flatness_control(1.0, 5.0, 12, 1.65, 41).unwrap();
        assert_eq!(eval_schedule(&plan.control, 0.0).unwrap(), 0.0);
        assert_eq!(eval_schedule(&plan.control, 5.0).unwrap(), 1.0);
        // the control overshoots its target while the transient is pushed
        // in, then settles back onto it before the horizon
        let peak = (0..=40)
            .map(|i| eval_schedule(&plan.control, 5.0 * i as f64 / 40.0).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(peak > 1.0, "peak control {peak}");
        let late = eval_schedule(&plan.control, 4.5).unwrap();
        assert!((late - 1.0).abs() <= 1e-3, "u(4.5) = {late}");

        let zero = flatness_control(0.0, 5.0, 12, 1.65, 41).unwrap();
        for i in 0..=40 {
            let t = 5.0 * i as f64 / 40.0;
            assert_eq!(eval_schedule(&zero.control, t).unwrap(), 0.0);
        }
    }

    #[test]
    fn flat_plan_rejects_divergent_series() {
        // a short horizon inflates the derivative scale by 1/T^k, far past
        // the tail budget
        match flatness_control(1.0, 1.0, 12, 1.65, 21) {
            Err(PlanError::SeriesDivergence { max_tail, limit }) => {
                println!("tail {max_tail:.3e} over limit {limit:.3e}");
                assert!(max_tail > limit);
            }
            other => panic!("expected SeriesDivergence, got {other:?}"),
        }
        assert!(matches!(
            flatness_control(1.0, 5.0, 3, 1.65, 21),
            Err(PlanError::InvalidPlan(_))
        ));
    }

    #[test]
    fn flat_series_residual_is_a_single_tail_term() {
        // the truncated series satisfies the diffusion equation up to
        // y^{(K+1)}·θ^{2K}/(2K)!; its magnitude stays small for these
        // parameters
        let truncation = 12;
        let step = GevreyStep::new(1.65, 5.0, truncation + 1).unwrap();
        let weight = PI.powi(2 * truncation as i32) / double_factorial_like(truncation);
        let mut worst = 0.0_f64;
        for i in 0..=50 {
            let t = 5.0 * i as f64 / 50.0;
            let jet = gevrey_jet(&step, t).unwrap();
            worst = worst.max(jet.derivative(truncation + 1).abs() * weight);
        }
        println!("max series residual {worst:.3e}");
        assert!(worst <= 1e-2, "residual {worst}");
    }

    #[test]
    fn flat_plan_drives_the_static_system_to_target() {
        let plan = flatness_control(1.0, 5.0, 12, 1.65, 201).unwrap();
        let config = SimConfig {
            mode: SimMode::StaticSingle,
            n_cells: 100,
            t_final: 5.0,
            dt_safety: 0.9,
            snapshot_every: 2.5,
            initial_r: FieldSpec::Constant(1.0),
            initial_s: FieldSpec::Constant(0.0),
            initial_s_r: None,
        };
        let traj = simulate(&config, &plan.control, None).unwrap();
        let end = traj.final_state();
        let grid = end.s.grid();
        let diff = Field::new(
            grid.clone(),
            end.s.values().iter().map(|&v| v - 1.0).collect(),
        );
        println!("terminal signal error {:.3e}", diff.l2_norm());
        assert!(diff.l2_norm() <= 1e-2);

        // the series field reproduces the simulated transient mid-plan
        let mid = traj.at_time(2.5).unwrap();
        let predicted = flatness_field(&plan, 2.5, grid).unwrap();
        let err = mid
            .s
            .values()
            .iter()
            .zip(predicted.values())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        println!("mid-plan field mismatch {err:.3e}");
        assert!(err <= 2e-2);

        // endpoint fields are exact
        let start = flatness_field(&plan, 0.0, grid).unwrap();
        assert_eq!(start.max_norm(), 0.0);
        let finish = flatness_field(&plan, 5.0, grid).unwrap();
        for &v in finish.values() {
            assert_eq!(v, 1.0);
        }
        assert!(flatness_field(&plan, 5.1, grid).is_err());
    }

    #[test]
    fn identity_target_needs_no_iterations() {
        let grid = make_grid(32).unwrap();
        let r0 = Field::from_fn(grid, |t| 1.0 + 0.2 * t.cos());
        let report = optimize_control(
            &r0,
            &r0.clone(),
            5.0,
            6,
            CostWeights::default(),
            1e-8,
            50,
        )
        .unwrap();
        assert_eq!(report.iterations, 0);
        assert_eq!(report.cost_history, vec![0.0]);
        assert_eq!(report.terminal_shape_error, 0.0);
        match &report.schedule {
            ControlSchedule::Tabulated(table) => {
                assert!(table.values().iter().all(|&v| v.abs() <= 1e-8));
            }
            other => panic!("expected a tabulated schedule, got {other:?}"),
        }
    }

    #[test]
    fn recovers_a_knot_representable_control() {
        let grid = make_grid(50).unwrap();
        let r0 = Field::constant(grid.clone(), 1.0);
        let horizon = 3.0;
        let knots = 6;
        let knot_times: Vec<f64> = (0..knots)
            .map(|j| horizon * j as f64 / (knots - 1) as f64)
            .collect();
        let generator = vec![0.0, 0.05, 0.12, 0.08, 0.02, 0.0];
        let table = TabulatedControl::new(knot_times, generator).unwrap();
        let config = SimConfig {
            mode: SimMode::GrowingSingle,
            n_cells: 50,
            t_final: horizon,
            dt_safety: 0.9,
            snapshot_every: horizon,
            initial_r: FieldSpec::Constant(1.0),
            initial_s: FieldSpec::Constant(0.0),
            initial_s_r: None,
        };
        let traj = simulate(&config, &ControlSchedule::Tabulated(table), None).unwrap();
        let r1 = traj.final_state().r.clone();

        let weights = CostWeights {
            shape: 100.0,
            signal: 1.0,
            reg: 1e-6,
        };
        let report = optimize_control(&r0, &r1, horizon, knots, weights, 1e-8, 80).unwrap();
        println!(
            "recovery: {} iterations, shape error {:.3e}, signal error {:.3e}",
            report.iterations, report.terminal_shape_error, report.terminal_signal_error
        );
        assert!(
            report.terminal_shape_error <= 1e-3 * r1.l2_norm(),
            "shape error {} vs budget {}",
            report.terminal_shape_error,
            1e-3 * r1.l2_norm()
        );
        for pair in report.cost_history.windows(2) {
            assert!(pair[1] <= pair[0], "cost increased: {pair:?}");
        }
    }

    #[test]
    fn tracking_error_identities() {
        let config = SimConfig {
            mode: SimMode::GrowingSingle,
            n_cells: 32,
            t_final: 2.0,
            dt_safety: 0.9,
            snapshot_every: 0.5,
            initial_r: FieldSpec::Constant(1.0),
            initial_s: FieldSpec::Constant(0.0),
            initial_s_r: None,
        };
        let traj = simulate(&config, &ControlSchedule::Constant(0.0), None).unwrap();
        // zero-control run against its own initial radius
        let grid = traj.final_state().r.grid().clone();
        let err = tracking_error(&traj, |_| Field::constant(grid.clone(), 1.0)).unwrap();
        assert_eq!(err, 0.0);

        let coarse = make_grid(16).unwrap();
        assert!(matches!(
            tracking_error(&traj, |_| Field::constant(coarse.clone(), 1.0)),
            Err(PlanError::Geometry(GeometryError::MismatchedGrids(_, _)))
        ));
    }
}
