//! Equilibrium signal profiles (zero, constant, exponential), the
//! self-similar radius they induce, and the shape-ratio diagnostic that
//! quantifies how close a run is to pure dilation.

use std::sync::Arc;
use thiserror::Error;

use crate::dynamics::Trajectory;
use crate::geometry::{self, Field, Grid};

#[derive(Debug, Error, PartialEq)]
pub enum EquilibriumError {
    #[error("boundary radius r(t, pi) not positive at t={t}")]
    DegenerateBoundaryRadius { t: f64 },
    #[error("boundary control u_e must be positive, got {0}")]
    NonPositiveBoundaryControl(f64),
    #[error("initial boundary radius must be positive, got {0}")]
    NonPositiveInitialRadius(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EquilibriumFamily {
    Zero,
    Constant,
    Exponential { lambda: f64 },
}

/// A steady signal profile with its boundary value u_e = s_e(π).
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumProfile {
    pub s_e: Field,
    pub u_e: f64,
    pub family: EquilibriumFamily,
}

impl EquilibriumProfile {
    /// Residual of the no-flux condition at θ=0. The constant family
    /// satisfies it exactly; the exponential family only approximately,
    /// with defect u_e·λ·e^{−λπ}.
    pub fn neumann_defect(&self) -> f64 {
        match self.family {
            EquilibriumFamily::Zero | EquilibriumFamily::Constant => 0.0,
            EquilibriumFamily::Exponential { lambda } => {
                self.u_e * lambda * (-lambda * std::f64::consts::PI).exp()
            }
        }
    }
}

/// The constant signal s_e ≡ u_e, a steady state meeting both boundary
/// conditions (u_e = 0 gives the no-signal equilibrium).
pub fn constant_equilibrium(u_e: f64, grid: &Arc<Grid>) -> EquilibriumProfile {
    EquilibriumProfile {
        s_e: Field::constant(grid.clone(), u_e),
        u_e,
        family: if u_e == 0.0 {
            EquilibriumFamily::Zero
        } else {
            EquilibriumFamily::Constant
        },
    }
}

/// The exponential family s_e(θ) = u_e·e^{λ(θ−π)}, which solves the steady
/// equation but meets the no-flux condition only up to its Neumann defect.
pub fn exponential_equilibrium(
    u_e: f64,
    lambda: f64,
    grid: &Arc<Grid>,
) -> Result<EquilibriumProfile, EquilibriumError> {
    if !(u_e > 0.0) {
        return Err(EquilibriumError::NonPositiveBoundaryControl(u_e));
    }
    Ok(EquilibriumProfile {
        s_e: Field::from_fn(grid.clone(), |theta| {
            u_e * (lambda * (theta - std::f64::consts::PI)).exp()
        }),
        u_e,
        family: EquilibriumFamily::Exponential { lambda },
    })
}

/// Nodal residual of the steady-state equation: s_e·s_e″ − (s_e′)², using the
/// same stencils as the solver so residual-zero profiles are discrete steady
/// states. Constants give an exactly zero residual.
pub fn equilibrium_residual(s_e: &Field) -> Field {
    let d1 = geometry::first_derivative(s_e);
    let d2 = geometry::second_derivative(s_e);
    let values = s_e
        .values()
        .iter()
        .zip(d1.values().iter().zip(d2.values()))
        .map(|(&s, (&sp, &spp))| s * spp - sp * sp)
        .collect();
    Field::new(s_e.grid().clone(), values)
}

/// Radius r_e(t,·) = s_e(·)·(t + r0_pi/u_e) grown by a steady signal from a
/// membrane with boundary radius r0_pi: a dilation of the signal profile, so
/// its shape ratio is time-independent.
pub fn self_similar_radius(
    profile: &EquilibriumProfile,
    r0_pi: f64,
    t: f64,
) -> Result<Field, EquilibriumError> {
    if !(profile.u_e > 0.0) {
        return Err(EquilibriumError::NonPositiveBoundaryControl(profile.u_e));
    }
    if !(r0_pi > 0.0) {
        return Err(EquilibriumError::NonPositiveInitialRadius(r0_pi));
    }
    let scale = t + r0_pi / profile.u_e;
    let values = profile.s_e.values().iter().map(|&s| s * scale).collect();
    Ok(Field::new(profile.s_e.grid().clone(), values))
}

/// Shape ratios ρ(t,θ) = r(t,θ)/r(t,π) for each snapshot of a run.
#[derive(Debug, Clone)]
pub struct ShapeRatio {
    times: Vec<f64>,
    rho: Vec<Field>,
}

impl ShapeRatio {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn rho(&self) -> &[Field] {
        &self.rho
    }

    /// Largest per-node spread of ρ across the snapshots inside
    /// [t_lo, t_hi]; zero means the shape did not change there. `None` if the
    /// window contains no snapshot.
    pub fn variation(&self, t_lo: f64, t_hi: f64) -> Option<f64> {
        let picked: Vec<&Field> = self
            .times
            .iter()
            .zip(&self.rho)
            .filter(|(&t, _)| t >= t_lo - 1e-9 && t <= t_hi + 1e-9)
            .map(|(_, f)| f)
            .collect();
        let first = picked.first()?;
        let mut worst = 0.0_f64;
        for node in 0..first.grid().n_nodes() {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for f in &picked {
                let v = f.values()[node];
                lo = lo.min(v);
                hi = hi.max(v);
            }
            worst = worst.max(hi - lo);
        }
        Some(worst)
    }
}

pub fn shape_ratio(traj: &Trajectory) -> Result<ShapeRatio, EquilibriumError> {
    let mut times = Vec::with_capacity(traj.snapshots().len());
    let mut rho = Vec::with_capacity(traj.snapshots().len());
    for snap in traj.snapshots() {
        let n = snap.r.grid().n_cells();
        let boundary = snap.r.values()[n];
        if !(boundary > 0.0) {
            return Err(EquilibriumError::DegenerateBoundaryRadius { t: snap.t });
        }
        let values = snap.r.values().iter().map(|&v| v / boundary).collect();
        times.push(snap.t);
        rho.push(Field::new(snap.r.grid().clone(), values));
    }
    Ok(ShapeRatio { times, rho })
}
