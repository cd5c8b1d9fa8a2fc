//! Forward-Euler time integration of the coupled radius/signal systems:
//! growing single-source, the static diffusion reduction, and the
//! double-source variant, with boundary conditions and an explicit stability
//! guard.

use std::sync::Arc;
use thiserror::Error;

use crate::controls::{eval_schedule, ControlError, ControlSchedule};
use crate::geometry::{self, Field, GeometryError, Grid};

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("radius reached {value} at t={t}, theta={theta}: membrane degenerated")]
    NonPositiveRadius { t: f64, theta: f64, value: f64 },
    #[error("dt={dt} exceeds the stability bound {bound}")]
    UnstableStep { dt: f64, bound: f64 },
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Control(#[from] ControlError),
}

/// Which coupled system to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimMode {
    /// Radius grows with the signal; the signal diffuses in the geometry the
    /// radius induces. Dirichlet control at θ=π, no-flux at θ=0.
    GrowingSingle,
    /// Same coupling for the radius, but the signal diffuses under the plain
    /// second derivative (frozen unit geometry).
    StaticSingle,
    /// Two signals with mirrored boundary conditions; the radius grows with
    /// their sum.
    GrowingDouble,
}

/// Initial data for a nodal field: either a constant or explicit values.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    Constant(f64),
    Nodal(Vec<f64>),
}

impl FieldSpec {
    pub fn realize(&self, grid: &Arc<Grid>) -> Result<Field, SimError> {
        match self {
            FieldSpec::Constant(c) => Ok(Field::constant(grid.clone(), *c)),
            FieldSpec::Nodal(values) => {
                if values.len() != grid.n_nodes() {
                    return Err(SimError::InvalidConfig(format!(
                        "nodal field has {} values but the grid has {} nodes",
                        values.len(),
                        grid.n_nodes()
                    )));
                }
                Ok(Field::new(grid.clone(), values.clone()))
            }
        }
    }
}

/// Boundary data for one step: one Dirichlet value in single-source modes,
/// a pair (left at θ=π, right at θ=0) in double-source mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryValues {
    Single(f64),
    Double { left: f64, right: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub mode: SimMode,
    pub n_cells: usize,
    pub t_final: f64,
    pub dt_safety: f64,
    pub snapshot_every: f64,
    pub initial_r: FieldSpec,
    pub initial_s: FieldSpec,
    /// Double-source mode only. Defaults to the mirror image of `initial_s`,
    /// which keeps a symmetric setup symmetric without restating it.
    pub initial_s_r: Option<FieldSpec>,
}

impl SimConfig {
    fn validate(&self) -> Result<(), SimError> {
        if !(self.t_final > 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "t_final must be positive, got {}",
                self.t_final
            )));
        }
        if !(self.snapshot_every > 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "snapshot_every must be positive, got {}",
                self.snapshot_every
            )));
        }
        if !(self.dt_safety > 0.0 && self.dt_safety <= 1.0) {
            return Err(SimError::InvalidConfig(format!(
                "dt_safety must lie in (0, 1], got {}",
                self.dt_safety
            )));
        }
        if self.initial_s_r.is_some() && self.mode != SimMode::GrowingDouble {
            return Err(SimError::InvalidConfig(
                "initial_s_r is only meaningful in double-source mode".into(),
            ));
        }
        Ok(())
    }
}

/// Radius and signal(s) at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledState {
    pub t: f64,
    pub r: Field,
    pub s: Field,
    /// Second signal, present only in double-source mode.
    pub s_r: Option<Field>,
}

/// Time-ordered snapshots of a run, always including t=0 and t=t_final.
#[derive(Debug, Clone)]
pub struct Trajectory {
    snapshots: Vec<CoupledState>,
    config: SimConfig,
}

impl Trajectory {
    /// Assembles a trajectory from externally produced snapshots.
    pub fn from_snapshots(
        snapshots: Vec<CoupledState>,
        config: SimConfig,
    ) -> Result<Self, SimError> {
        if snapshots.is_empty() {
            return Err(SimError::InvalidConfig(
                "trajectory needs at least one snapshot".into(),
            ));
        }
        if snapshots.windows(2).any(|w| !(w[1].t > w[0].t)) {
            return Err(SimError::InvalidConfig(
                "snapshot times must be strictly increasing".into(),
            ));
        }
        Ok(Trajectory { snapshots, config })
    }

    pub fn snapshots(&self) -> &[CoupledState] {
        &self.snapshots
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn final_state(&self) -> &CoupledState {
        self.snapshots.last().expect("trajectory is never empty")
    }

    /// Snapshot whose time matches `t` to within 1e-9, if any.
    pub fn at_time(&self, t: f64) -> Option<&CoupledState> {
        self.snapshots.iter().find(|s| (s.t - t).abs() <= 1e-9)
    }
}

struct Integrator {
    grid: Arc<Grid>,
    mode: SimMode,
    h: f64,
    r: Vec<f64>,
    s: Vec<f64>,
    s_r: Vec<f64>,
    rt: Vec<f64>,
    rtt: Vec<f64>,
    g: Vec<f64>,
    r_next: Vec<f64>,
    s_next: Vec<f64>,
    s_r_next: Vec<f64>,
}

impl Integrator {
    fn from_state(state: &CoupledState, mode: SimMode) -> Result<Self, SimError> {
        state.r.same_grid(&state.s)?;
        match (mode, &state.s_r) {
            (SimMode::GrowingDouble, None) => {
                return Err(SimError::InvalidConfig(
                    "double-source mode needs a second signal field".into(),
                ))
            }
            (SimMode::GrowingDouble, Some(s_r)) => state.r.same_grid(s_r)?,
            (_, Some(_)) => {
                return Err(SimError::InvalidConfig(
                    "single-source modes carry no second signal field".into(),
                ))
            }
            (_, None) => {}
        }
        state.r.ensure_positive()?;
        let grid = state.r.grid().clone();
        let n_nodes = grid.n_nodes();
        let zeros = vec![0.0; n_nodes];
        Ok(Integrator {
            h: grid.dtheta(),
            mode,
            r: state.r.values().to_vec(),
            s: state.s.values().to_vec(),
            s_r: state
                .s_r
                .as_ref()
                .map_or_else(|| zeros.clone(), |f| f.values().to_vec()),
            rt: zeros.clone(),
            rtt: zeros.clone(),
            g: zeros.clone(),
            r_next: zeros.clone(),
            s_next: zeros.clone(),
            s_r_next: zeros,
            grid,
        })
    }

    /// Parabolic stability bound (dtheta²/2)·min g for the current radius;
    /// fills the metric scratch arrays the update reuses. The static mode
    /// diffuses with unit coefficient, so its bound ignores the radius.
    fn stability_bound(&mut self) -> f64 {
        let min_g = match self.mode {
            SimMode::StaticSingle => 1.0,
            _ => geometry::metric_kernel(&self.r, self.h, &mut self.rt, &mut self.rtt, &mut self.g),
        };
        0.5 * self.h * self.h * min_g
    }

    /// One forward-Euler update from the current arrays. Both fields advance
    /// from the same time level; Dirichlet values are imposed afterwards.
    /// Expects the metric arrays filled by `stability_bound`.
    fn advance(&mut self, dt: f64, u: &BoundaryValues, t_new: f64) -> Result<(), SimError> {
        let Integrator {
            grid,
            mode,
            h,
            r,
            s,
            s_r,
            rt,
            rtt,
            g,
            r_next,
            s_next,
            s_r_next,
        } = self;
        let n = grid.n_cells();
        let h = *h;
        let h2 = h * h;
        match mode {
            SimMode::GrowingSingle | SimMode::StaticSingle => {
                let u_val = match u {
                    BoundaryValues::Single(v) => *v,
                    BoundaryValues::Double { .. } => {
                        return Err(SimError::InvalidConfig(
                            "two boundary values supplied to a single-source mode".into(),
                        ))
                    }
                };
                if *mode == SimMode::StaticSingle {
                    for i in 1..n {
                        s_next[i] = s[i] + dt * (((s[i - 1] + s[i + 1]) - 2.0 * s[i]) / h2);
                    }
                    s_next[0] = s[0] + dt * (2.0 * (s[1] - s[0]) / h2);
                } else {
                    for i in 1..n {
                        let gi = g[i];
                        let lap = ((s[i - 1] + s[i + 1]) - 2.0 * s[i]) / h2;
                        let sp = (s[i + 1] - s[i - 1]) / (2.0 * h);
                        let adv = rt[i] * (r[i] + rtt[i]);
                        s_next[i] = s[i] + dt * (lap / gi - adv * sp / (gi * gi));
                    }
                    // no-flux via mirror ghost: the odd part of the stencil
                    // cancels, leaving twice the inward difference
                    s_next[0] = s[0] + dt * (2.0 * (s[1] - s[0]) / h2 / g[0]);
                }
                s_next[n] = u_val;
                for i in 0..=n {
                    r_next[i] = r[i] + dt * s[i];
                }
            }
            SimMode::GrowingDouble => {
                let (u_l, u_r) = match u {
                    BoundaryValues::Double { left, right } => (*left, *right),
                    BoundaryValues::Single(_) => {
                        return Err(SimError::InvalidConfig(
                            "double-source mode needs two boundary values".into(),
                        ))
                    }
                };
                // The two updates are written as exact mirror images of each
                // other (commutative sums, shared even/odd metric arrays), so
                // a mirror-symmetric state stays bitwise mirror-symmetric.
                for i in 1..n {
                    let gi = g[i];
                    let adv = rt[i] * (r[i] + rtt[i]);
                    let lap_l = ((s[i - 1] + s[i + 1]) - 2.0 * s[i]) / h2;
                    let sp_l = (s[i + 1] - s[i - 1]) / (2.0 * h);
                    s_next[i] = s[i] + dt * (lap_l / gi - adv * sp_l / (gi * gi));
                    let lap_r = ((s_r[i - 1] + s_r[i + 1]) - 2.0 * s_r[i]) / h2;
                    let sp_r = (s_r[i + 1] - s_r[i - 1]) / (2.0 * h);
                    s_r_next[i] = s_r[i] + dt * (lap_r / gi - adv * sp_r / (gi * gi));
                }
                s_next[0] = s[0] + dt * (2.0 * (s[1] - s[0]) / h2 / g[0]);
                s_next[n] = u_l;
                s_r_next[n] = s_r[n] + dt * (2.0 * (s_r[n - 1] - s_r[n]) / h2 / g[n]);
                s_r_next[0] = u_r;
                for i in 0..=n {
                    r_next[i] = r[i] + dt * (s[i] + s_r[i]);
                }
            }
        }
        for (i, &v) in r_next.iter().enumerate() {
            if !(v > 0.0) {
                return Err(SimError::NonPositiveRadius {
                    t: t_new,
                    theta: grid.theta(i),
                    value: v,
                });
            }
        }
        std::mem::swap(r, r_next);
        std::mem::swap(s, s_next);
        if *mode == SimMode::GrowingDouble {
            std::mem::swap(s_r, s_r_next);
        }
        Ok(())
    }

    fn state(&self, t: f64) -> CoupledState {
        CoupledState {
            t,
            r: Field::new(self.grid.clone(), self.r.clone()),
            s: Field::new(self.grid.clone(), self.s.clone()),
            s_r: (self.mode == SimMode::GrowingDouble)
                .then(|| Field::new(self.grid.clone(), self.s_r.clone())),
        }
    }
}

/// Largest stable step size for the state: dt_safety·(dtheta²/2)·min g.
pub fn stable_dt(state: &CoupledState, mode: SimMode, dt_safety: f64) -> Result<f64, SimError> {
    let mut integ = Integrator::from_state(state, mode)?;
    Ok(dt_safety * integ.stability_bound())
}

/// Single forward-Euler step; rejects steps beyond the stability bound.
pub fn step(
    state: &CoupledState,
    dt: f64,
    u: &BoundaryValues,
    mode: SimMode,
) -> Result<CoupledState, SimError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(SimError::InvalidConfig(format!(
            "step size must be positive and finite, got {dt}"
        )));
    }
    let mut integ = Integrator::from_state(state, mode)?;
    let bound = integ.stability_bound();
    if dt > bound * (1.0 + 1e-9) {
        return Err(SimError::UnstableStep { dt, bound });
    }
    let t_new = state.t + dt;
    integ.advance(dt, u, t_new)?;
    Ok(integ.state(t_new))
}

fn mirrored(f: &Field) -> Field {
    let n = f.grid().n_cells();
    let vals = (0..=n).map(|i| f.values()[n - i]).collect();
    Field::new(f.grid().clone(), vals)
}

fn boundary_values_at(
    mode: SimMode,
    control: &ControlSchedule,
    control_right: Option<&ControlSchedule>,
    t: f64,
) -> Result<BoundaryValues, SimError> {
    match mode {
        SimMode::GrowingDouble => Ok(BoundaryValues::Double {
            left: eval_schedule(control, t)?,
            right: eval_schedule(control_right.expect("presence checked by simulate"), t)?,
        }),
        _ => Ok(BoundaryValues::Single(eval_schedule(control, t)?)),
    }
}

/// Integrates from t=0 to t_final with the stability-bounded step size,
/// recording snapshots at multiples of `snapshot_every` (hit exactly by
/// capping dt) plus the initial and final states.
pub fn simulate(
    config: &SimConfig,
    control: &ControlSchedule,
    control_right: Option<&ControlSchedule>,
) -> Result<Trajectory, SimError> {
    config.validate()?;
    match (config.mode, control_right.is_some()) {
        (SimMode::GrowingDouble, false) => {
            return Err(SimError::InvalidConfig(
                "double-source mode needs a right control schedule".into(),
            ))
        }
        (SimMode::GrowingDouble, true) => {}
        (_, true) => {
            return Err(SimError::InvalidConfig(
                "single-source modes take exactly one control schedule".into(),
            ))
        }
        (_, false) => {}
    }
    let grid = geometry::make_grid(config.n_cells)?;
    let r0 = config.initial_r.realize(&grid)?;
    let s0 = config.initial_s.realize(&grid)?;
    let s_r0 = if config.mode == SimMode::GrowingDouble {
        Some(match &config.initial_s_r {
            Some(spec) => spec.realize(&grid)?,
            None => mirrored(&s0),
        })
    } else {
        None
    };
    let state0 = CoupledState {
        t: 0.0,
        r: r0,
        s: s0,
        s_r: s_r0,
    };
    let mut integ = Integrator::from_state(&state0, config.mode)?;
    let mut snapshots = vec![state0];
    let mut t = 0.0;
    let mut k: u64 = 1;
    while t < config.t_final {
        let next_snap = k as f64 * config.snapshot_every;
        let event = next_snap.min(config.t_final);
        let bound = config.dt_safety * integ.stability_bound();
        let (dt, t_new, hits_event) = if bound >= event - t {
            (event - t, event, true)
        } else {
            (bound, t + bound, false)
        };
        let u = boundary_values_at(config.mode, control, control_right, t_new)?;
        integ.advance(dt, &u, t_new)?;
        t = t_new;
        if hits_event {
            snapshots.push(integ.state(t));
            if event >= config.t_final {
                break;
            }
            k += 1;
        }
    }
    Ok(Trajectory {
        snapshots,
        config: config.clone(),
    })
}
