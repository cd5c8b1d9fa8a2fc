//! Grid-refinement study: runs one experiment at a ladder of resolutions and
//! reports how fast the final radius stops changing.

use std::fmt;

use dpde::dynamics::{simulate, FieldSpec, SimConfig};

use crate::error::HarnessError;
use crate::runner::resolve_experiment;

/// Successive-difference table from a refinement ladder. `diffs[k]` is the
/// max-norm difference of r(T, ·) between levels k and k+1 on the nodes they
/// share; `orders[k]` is log₂(diffs[k]/diffs[k+1]), or `None` when the finer
/// difference is exactly zero.
#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub levels: Vec<usize>,
    pub diffs: Vec<f64>,
    pub orders: Vec<Option<f64>>,
}

impl fmt::Display for ConvergenceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n_cells: {:?}", self.levels)?;
        for (k, d) in self.diffs.iter().enumerate() {
            writeln!(
                f,
                "max diff of r(T) between {} and {} cells: {d:e}",
                self.levels[k],
                self.levels[k + 1]
            )?;
        }
        for (k, order) in self.orders.iter().enumerate() {
            match order {
                Some(p) => writeln!(f, "observed order at {} cells: {p:.3}", self.levels[k + 1])?,
                None => writeln!(f, "observed order at {} cells: exact", self.levels[k + 1])?,
            }
        }
        Ok(())
    }
}

/// Runs `source` at every resolution in `levels` (each must double the
/// previous; at least three levels) and compares the final radius profiles
/// on shared nodes. The time step follows the stability rule at each level,
/// so refining the grid refines the whole discretization.
pub fn convergence_study(source: &str, levels: &[usize]) -> Result<ConvergenceTable, HarnessError> {
    if levels.len() < 3 {
        return Err(HarnessError::InvalidArgument(format!(
            "a refinement study needs at least 3 levels, got {}",
            levels.len()
        )));
    }
    for w in levels.windows(2) {
        if w[1] != 2 * w[0] {
            return Err(HarnessError::InvalidArgument(format!(
                "each level must double the previous, got {} after {}",
                w[1], w[0]
            )));
        }
    }
    let (experiment, _) = resolve_experiment(source)?;
    if matches!(experiment.config.initial_r, FieldSpec::Nodal(_))
        || matches!(experiment.config.initial_s, FieldSpec::Nodal(_))
        || matches!(experiment.config.initial_s_r, Some(FieldSpec::Nodal(_)))
    {
        return Err(HarnessError::InvalidArgument(
            "refinement studies need constant initial data; nodal values are tied to one grid"
                .into(),
        ));
    }

    let mut finals: Vec<Vec<f64>> = Vec::with_capacity(levels.len());
    for &n_cells in levels {
        let config = SimConfig {
            n_cells,
            ..experiment.config.clone()
        };
        let traj = simulate(
            &config,
            &experiment.control,
            experiment.control_right.as_ref(),
        )?;
        finals.push(traj.final_state().r.values().to_vec());
    }

    let mut diffs = Vec::with_capacity(levels.len() - 1);
    for pair in finals.windows(2) {
        let (coarse, fine) = (&pair[0], &pair[1]);
        let d = coarse
            .iter()
            .enumerate()
            .map(|(i, &c)| (fine[2 * i] - c).abs())
            .fold(0.0_f64, f64::max);
        diffs.push(d);
    }
    let orders = diffs
        .windows(2)
        .map(|w| {
            if w[1] == 0.0 {
                None
            } else {
                Some((w[0] / w[1]).log2())
            }
        })
        .collect();

    Ok(ConvergenceTable {
        levels: levels.to_vec(),
        diffs,
        orders,
    })
}
