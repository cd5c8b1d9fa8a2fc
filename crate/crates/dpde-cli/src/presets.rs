//! Built-in experiments, named after the plots they reproduce. All of them
//! start from the unit half-circle (r ≡ 1, s ≡ 0) on 100 cells and snapshot
//! every 0.5 time units; they differ in mode, control and horizon.

use dpde::controls::{self, ControlSchedule};
use dpde::dynamics::{FieldSpec, SimConfig, SimMode};

use crate::config::Experiment;
use crate::error::HarnessError;

pub const PRESET_NAMES: [&str; 5] = [
    "fig2_growing_const",
    "fig_static_const",
    "fig4_apple",
    "fig5_circle",
    "fig6_double",
];

fn base_config(mode: SimMode, t_final: f64) -> SimConfig {
    SimConfig {
        mode,
        n_cells: 100,
        t_final,
        dt_safety: 0.9,
        snapshot_every: 0.5,
        initial_r: FieldSpec::Constant(1.0),
        initial_s: FieldSpec::Constant(0.0),
        initial_s_r: None,
    }
}

fn single(mode: SimMode, t_final: f64, control: ControlSchedule) -> Experiment {
    Experiment {
        config: base_config(mode, t_final),
        control,
        control_right: None,
    }
}

/// Looks up a named preset.
///
/// * `fig2_growing_const`: constant control, full geometry coupling; the
///   membrane settles into uniform dilation. T=8, long enough to show the
///   settled regime.
/// * `fig_static_const`: the same control on the frozen-geometry reduction,
///   also over T=8 for side-by-side comparison.
/// * `fig4_apple`: one full sine oscillation; the overshoot and recoil leave
///   an apple-like indentation at the controlled pole. T=10 gives the shape
///   time to set after the control window closes at t=5.
/// * `fig5_circle`: half a sine oscillation over T=10, sized so the membrane
///   ends close to a circle.
/// * `fig6_double`: the half oscillation fed symmetrically from both poles,
///   T=10.
pub fn preset(name: &str) -> Result<Experiment, HarnessError> {
    match name {
        "fig2_growing_const" => Ok(single(SimMode::GrowingSingle, 8.0, controls::u1())),
        "fig_static_const" => Ok(single(SimMode::StaticSingle, 8.0, controls::u1())),
        "fig4_apple" => Ok(single(SimMode::GrowingSingle, 10.0, controls::u2())),
        "fig5_circle" => Ok(single(SimMode::GrowingSingle, 10.0, controls::u3())),
        "fig6_double" => Ok(Experiment {
            config: base_config(SimMode::GrowingDouble, 10.0),
            control: controls::u3(),
            control_right: Some(controls::u3()),
        }),
        other => Err(HarnessError::UnknownSource(other.to_string())),
    }
}
