//! Boundary-control schedules (the constant and windowed-sine controls of the
//! membrane experiments, tabulated controls, and flat-series boundary traces)
//! plus the Gevrey-class smooth step whose time derivatives feed the flatness
//! planner.

pub mod jet;

use std::f64::consts::PI;
use thiserror::Error;

use jet::Jet;

#[derive(Debug, Error, PartialEq)]
pub enum ControlError {
    #[error("gevrey step needs sigma in [1, 3], duration > 0, max_order >= 1 (got sigma={sigma}, duration={duration}, max_order={max_order})")]
    InvalidGevrey {
        sigma: f64,
        duration: f64,
        max_order: usize,
    },
    #[error("time {t} outside the step window [0, {duration}]")]
    TimeOutsideWindow { t: f64, duration: f64 },
    #[error("tabulated control: {0}")]
    InvalidTable(String),
    #[error("time {t} outside the tabulated range [{lo}, {hi}]")]
    TimeOutsideTable { t: f64, lo: f64, hi: f64 },
}

/// Piecewise-linear control read off a strictly increasing time table.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedControl {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TabulatedControl {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self, ControlError> {
        if times.len() < 2 {
            return Err(ControlError::InvalidTable(
                "need at least two rows".into(),
            ));
        }
        if times.len() != values.len() {
            return Err(ControlError::InvalidTable(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(ControlError::InvalidTable(
                "times must be strictly increasing".into(),
            ));
        }
        if times.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(ControlError::InvalidTable("non-finite entry".into()));
        }
        Ok(TabulatedControl { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, t: f64) -> Result<f64, ControlError> {
        let (lo, hi) = (self.times[0], *self.times.last().unwrap());
        if t < lo || t > hi {
            return Err(ControlError::TimeOutsideTable { t, lo, hi });
        }
        let k = match self
            .times
            .binary_search_by(|x| x.partial_cmp(&t).unwrap())
        {
            Ok(i) => return Ok(self.values[i]),
            Err(i) => i - 1,
        };
        let w = (t - self.times[k]) / (self.times[k + 1] - self.times[k]);
        Ok(self.values[k] * (1.0 - w) + self.values[k + 1] * w)
    }
}

/// Smooth step y: [0, T] -> [0, 1] of Gevrey class, flat to every order at
/// both endpoints: y(t) = Φ(t/T)/Φ(1) with Φ(τ) = ∫₀^τ exp(−1/(ξ(1−ξ))^σ) dξ.
#[derive(Debug, Clone, PartialEq)]
pub struct GevreyStep {
    sigma: f64,
    duration: f64,
    max_order: usize,
    phi_one: f64,
}

impl GevreyStep {
    pub fn new(sigma: f64, duration: f64, max_order: usize) -> Result<Self, ControlError> {
        if !(1.0..=3.0).contains(&sigma) || !(duration > 0.0) || max_order < 1 {
            return Err(ControlError::InvalidGevrey {
                sigma,
                duration,
                max_order,
            });
        }
        let phi_one = phi(sigma, 1.0);
        Ok(GevreyStep {
            sigma,
            duration,
            max_order,
            phi_one,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }
}

// 16-point Gauss-Legendre rule on [-1, 1]: positive abscissae and weights.
const GL16_NODES: [f64; 8] = [
    0.095012509837637440185,
    0.281603550779258913230,
    0.458016777657227386342,
    0.617876244402643748447,
    0.755404408355003033895,
    0.865631202387831743880,
    0.944575023073232576078,
    0.989400934991649932596,
];
const GL16_WEIGHTS: [f64; 8] = [
    0.189450610455068496285,
    0.182603415044923588867,
    0.169156519395002538189,
    0.149595988816576732081,
    0.124628971255533872052,
    0.095158511682492784810,
    0.062253523938647892863,
    0.027152459411754094852,
];
const PHI_PANELS: usize = 48;

/// Jet of the integrand exp(−1/(x(1−x))^σ) at x, flat-zero outside (0, 1).
fn bump_jet(sigma: f64, x: f64, order: usize) -> Jet {
    let xj = Jet::variable(order, x);
    let prod = xj.mul(&Jet::constant(order, 1.0).add(&xj.neg()));
    if !(prod.value() > 0.0) {
        return Jet::zeros(order);
    }
    // Where (x(1−x))^−σ > 745 the result underflows to exactly 0.0 anyway;
    // bailing out here keeps every intermediate coefficient finite (the ln
    // coefficients blow up like (1/x)^k as x -> 0).
    if !(prod.value().powf(-sigma) <= 745.0) {
        return Jet::zeros(order);
    }
    prod.powf(-sigma).neg().exp()
}

/// Φ(τ) by a fixed composite Gauss-Legendre rule: deterministic and accurate
/// to roundoff for this C^∞ integrand.
fn phi(sigma: f64, tau: f64) -> f64 {
    if tau <= 0.0 {
        return 0.0;
    }
    let width = tau / PHI_PANELS as f64;
    let mut total = 0.0;
    for p in 0..PHI_PANELS {
        let mid = (p as f64 + 0.5) * width;
        let half = 0.5 * width;
        for j in 0..8 {
            let f_lo = bump_jet(sigma, mid - half * GL16_NODES[j], 0).value();
            let f_hi = bump_jet(sigma, mid + half * GL16_NODES[j], 0).value();
            total += half * GL16_WEIGHTS[j] * (f_lo + f_hi);
        }
    }
    total
}

/// Value and time derivatives of the step through order `max_order`,
/// packaged as a jet in t: y^{(k)}(t) = Φ^{(k)}(t/T)/(T^k·Φ(1)).
pub fn gevrey_jet(step: &GevreyStep, t: f64) -> Result<Jet, ControlError> {
    let order = step.max_order;
    let big_t = step.duration;
    if t < 0.0 || t > big_t || t.is_nan() {
        return Err(ControlError::TimeOutsideWindow {
            t,
            duration: big_t,
        });
    }
    let tau = t / big_t;
    let mut out = vec![0.0; order + 1];
    out[0] = if tau >= 1.0 {
        1.0
    } else {
        phi(step.sigma, tau) / step.phi_one
    };
    let h = bump_jet(step.sigma, tau, order - 1);
    let mut t_pow = 1.0;
    for k in 1..=order {
        t_pow *= big_t;
        out[k] = h.coefficients()[k - 1] / (k as f64 * t_pow * step.phi_one);
    }
    Ok(Jet::from_coefficients(out))
}

/// Boundary trace of the flat-series field: the signal profile generated by a
/// Gevrey flat output `target·y(t)`, evaluated through the even power series
/// Σ_k y^{(k)}(t)·θ^{2k}/(2k)! at θ = π.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatSeriesControl {
    pub target: f64,
    pub step: GevreyStep,
}

impl FlatSeriesControl {
    /// Series value at angle `theta`; t is clamped to the step window, so the
    /// control holds its target value after the transition completes.
    pub fn series_value(&self, t: f64, theta: f64) -> f64 {
        let t_in = t.clamp(0.0, self.step.duration());
        let jet = gevrey_jet(&self.step, t_in).expect("clamped into window");
        let mut sum = 0.0;
        let mut theta_pow = 1.0; // θ^{2k}
        let mut fact = 1.0; // (2k)!
        for k in 0..=self.step.max_order() {
            if k > 0 {
                theta_pow *= theta * theta;
                fact *= (2 * k - 1) as f64 * (2 * k) as f64;
            }
            sum += jet.derivative(k) * theta_pow / fact;
        }
        self.target * sum
    }

    pub fn boundary_value(&self, t: f64) -> f64 {
        self.series_value(t, PI)
    }
}

/// An open-loop boundary control u(t).
#[derive(Debug, Clone, PartialEq)]
pub enum ControlSchedule {
    Constant(f64),
    /// amplitude·sin(omega·t) on [0, active_until], zero afterwards.
    WindowedSine {
        amplitude: f64,
        omega: f64,
        active_until: f64,
    },
    Tabulated(TabulatedControl),
    FlatSeries(FlatSeriesControl),
}

/// The constant control of the equilibration experiment.
pub fn u1() -> ControlSchedule {
    ControlSchedule::Constant(1.0)
}

/// One full sinusoidal oscillation over [0, 5].
pub fn u2() -> ControlSchedule {
    ControlSchedule::WindowedSine {
        amplitude: 0.5,
        omega: 2.0 * PI / 5.0,
        active_until: 5.0,
    }
}

/// Half a sinusoidal oscillation, over [0, 2.5]. The sine vanishes at both
/// window ends, so extending by zero keeps the control continuous.
pub fn u3() -> ControlSchedule {
    ControlSchedule::WindowedSine {
        amplitude: 0.2,
        omega: 2.0 * PI / 5.0,
        active_until: 2.5,
    }
}

pub fn eval_schedule(sched: &ControlSchedule, t: f64) -> Result<f64, ControlError> {
    match sched {
        ControlSchedule::Constant(c) => Ok(*c),
        ControlSchedule::WindowedSine {
            amplitude,
            omega,
            active_until,
        } => {
            if (0.0..=*active_until).contains(&t) {
                Ok(amplitude * (omega * t).sin())
            } else {
                Ok(0.0)
            }
        }
        ControlSchedule::Tabulated(table) => table.eval(t),
        ControlSchedule::FlatSeries(series) => Ok(series.boundary_value(t)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Φ(1) for σ=1.65 cross-checked against an independent quadrature.
    const PHI_ONE_SIGMA_165: f64 = 1.0991906631962272e-5;

    #[test]
    fn quadrature_rule_sanity() {
        let wsum: f64 = 2.0 * GL16_WEIGHTS.iter().sum::<f64>();
        assert_relative_eq!(wsum, 2.0, max_relative = 1e-14);
        // integrate x^8 over [0,1] with a single panel of the composite rule
        let mut total = 0.0;
        for j in 0..8 {
            let lo: f64 = 0.5 - 0.5 * GL16_NODES[j];
            let hi: f64 = 0.5 + 0.5 * GL16_NODES[j];
            total += 0.5 * GL16_WEIGHTS[j] * (lo.powi(8) + hi.powi(8));
        }
        assert_relative_eq!(total, 1.0 / 9.0, max_relative = 1e-14);
    }

    #[test]
    fn phi_one_matches_reference() {
        assert_relative_eq!(
            phi(1.65, 1.0),
            PHI_ONE_SIGMA_165,
            max_relative = 1e-12
        );
    }

    #[test]
    fn named_controls_match_their_definitions() {
        assert_eq!(eval_schedule(&u1(), 3.3).unwrap(), 1.0);
        assert_relative_eq!(eval_schedule(&u2(), 1.25).unwrap(), 0.5);
        assert!(eval_schedule(&u3(), 2.5).unwrap().abs() < 1e-15);
        assert_eq!(eval_schedule(&u3(), 4.0).unwrap(), 0.0);
        assert_eq!(eval_schedule(&u2(), 7.0).unwrap(), 0.0);
        // continuity at the window edges: the sine itself vanishes there
        assert!(eval_schedule(&u2(), 5.0).unwrap().abs() < 1e-15);
        assert!(eval_schedule(&u3(), 2.5 - 1e-12).unwrap().abs() < 1e-12);
    }

    #[test]
    fn tabulated_interpolates_and_rejects_outside() {
        let tab = TabulatedControl::new(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, -2.0]).unwrap();
        assert_relative_eq!(tab.eval(0.5).unwrap(), 1.0);
        assert_relative_eq!(tab.eval(2.0).unwrap(), 0.0);
        assert_eq!(tab.eval(1.0).unwrap(), 2.0);
        assert!(matches!(
            tab.eval(3.5),
            Err(ControlError::TimeOutsideTable { .. })
        ));
        assert!(TabulatedControl::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(TabulatedControl::new(vec![0.0], vec![1.0]).is_err());
    }

    #[test]
    fn gevrey_rejects_bad_parameters() {
        assert!(GevreyStep::new(0.5, 5.0, 10).is_err());
        assert!(GevreyStep::new(1.65, -1.0, 10).is_err());
        assert!(GevreyStep::new(1.65, 5.0, 0).is_err());
        let step = GevreyStep::new(1.65, 5.0, 10).unwrap();
        assert!(matches!(
            gevrey_jet(&step, 5.1),
            Err(ControlError::TimeOutsideWindow { .. })
        ));
        assert!(gevrey_jet(&step, -0.1).is_err());
    }

    #[test]
    fn gevrey_endpoints_are_flat() {
        let step = GevreyStep::new(1.65, 5.0, 12).unwrap();
        let j0 = gevrey_jet(&step, 0.0).unwrap();
        let j1 = gevrey_jet(&step, 5.0).unwrap();
        assert_eq!(j0.value(), 0.0);
        assert_eq!(j1.value(), 1.0);
        for k in 1..=12 {
            assert!(j0.derivative(k).abs() <= 1e-12, "order {k} at t=0");
            assert!(j1.derivative(k).abs() <= 1e-12, "order {k} at t=T");
        }
    }

    #[test]
    fn gevrey_midpoint_symmetry_and_monotonicity() {
        let step = GevreyStep::new(1.65, 5.0, 4).unwrap();
        let y = |t: f64| gevrey_jet(&step, t).unwrap().value();
        assert_relative_eq!(y(2.5), 0.5, max_relative = 1e-12);
        for k in 0..=10 {
            let tau = 0.25 * k as f64;
            assert!(
                (y(2.5 + tau) + y(2.5 - tau) - 1.0).abs() <= 1e-10,
                "symmetry at offset {tau}"
            );
        }
        let mut prev = -1.0;
        for k in 0..=100 {
            let v = y(5.0 * k as f64 / 100.0);
            assert!(v >= prev - 1e-12, "not monotone at sample {k}");
            prev = v;
        }
    }

    // Central finite-difference stencils of y^{(k)} for k = 1..4, Richardson
    // extrapolated (h and h/2), as an independent oracle for the jet values.
    fn fd_derivative(y: &dyn Fn(f64) -> f64, t: f64, k: usize, h: f64) -> f64 {
        match k {
            1 => (y(t + h) - y(t - h)) / (2.0 * h),
            2 => (y(t + h) - 2.0 * y(t) + y(t - h)) / (h * h),
            3 => (y(t + 2.0 * h) - 2.0 * y(t + h) + 2.0 * y(t - h) - y(t - 2.0 * h))
                / (2.0 * h * h * h),
            4 => (y(t + 2.0 * h) - 4.0 * y(t + h) + 6.0 * y(t) - 4.0 * y(t - h)
                + y(t - 2.0 * h))
                / (h * h * h * h),
            _ => unreachable!(),
        }
    }

    #[test]
    fn jet_derivatives_match_richardson_differences() {
        let step = GevreyStep::new(1.65, 5.0, 6).unwrap();
        let y = |t: f64| gevrey_jet(&step, t).unwrap().value();
        // (t, order, h): points where the extrapolated stencil itself is
        // accurate well past the 1e-6 budget. Even orders are skipped at
        // t=2.5, where they vanish by symmetry and relative error is
        // meaningless.
        let cases = [
            (2.0, 1, 0.01),
            (2.0, 2, 0.01),
            (2.0, 3, 0.01),
            (2.0, 4, 0.02),
            (2.5, 1, 0.01),
            (2.5, 3, 0.01),
            (3.0, 1, 0.01),
            (3.0, 2, 0.01),
            (3.0, 3, 0.01),
            (3.0, 4, 0.02),
        ];
        for &(t, k, h) in &cases {
            let coarse = fd_derivative(&y, t, k, h);
            let fine = fd_derivative(&y, t, k, h / 2.0);
            let extrapolated = (4.0 * fine - coarse) / 3.0;
            let jet_val = gevrey_jet(&step, t).unwrap().derivative(k);
            let rel = (jet_val - extrapolated).abs() / extrapolated.abs();
            println!("t={t} k={k}: jet {jet_val:.9e} fd {extrapolated:.9e} rel {rel:.2e}");
            assert!(rel <= 1e-6, "t={t}, order {k}: relative error {rel}");
        }
    }

    #[test]
    fn flat_series_boundary_trace_endpoints() {
        let series = FlatSeriesControl {
            target: 1.0,
            step: GevreyStep::new(1.65, 5.0, 12).unwrap(),
        };
        assert!(series.boundary_value(0.0).abs() <= 1e-12);
        assert_relative_eq!(series.boundary_value(5.0), 1.0, max_relative = 1e-12);
        // holds the target after the window
        assert_relative_eq!(series.boundary_value(6.0), 1.0, max_relative = 1e-12);
    }
}
