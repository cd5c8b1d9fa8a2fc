//! Uniform node-centered grid on [0, π], nodal fields, finite-difference
//! stencils, and the induced metric / Laplace-Beltrami operator of a radial
//! membrane.

use std::f64::consts::PI;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("grid too coarse: n_cells={0}, need at least {MIN_CELLS}")]
    GridTooCoarse(usize),
    #[error("radius not positive at theta={theta:.6} (node {index}): r={value}")]
    NonPositiveRadius {
        index: usize,
        theta: f64,
        value: f64,
    },
    #[error("fields live on different grids ({0} vs {1} cells)")]
    MismatchedGrids(usize, usize),
}

/// Coarsest grid the one-sided endpoint stencils make sense on.
pub const MIN_CELLS: usize = 8;

/// Uniform grid of `n_cells + 1` nodes on [0, π], endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n_cells: usize,
    dtheta: f64,
    thetas: Vec<f64>,
}

impl Grid {
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }

    pub fn dtheta(&self) -> f64 {
        self.dtheta
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn theta(&self, i: usize) -> f64 {
        self.thetas[i]
    }
}

pub fn make_grid(n_cells: usize) -> Result<Arc<Grid>, GeometryError> {
    if n_cells < MIN_CELLS {
        return Err(GeometryError::GridTooCoarse(n_cells));
    }
    let mut thetas: Vec<f64> = (0..=n_cells)
        .map(|i| PI * i as f64 / n_cells as f64)
        .collect();
    thetas[n_cells] = PI;
    Ok(Arc::new(Grid {
        n_cells,
        dtheta: PI / n_cells as f64,
        thetas,
    }))
}

/// Nodal values of a scalar function on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Self {
        assert_eq!(
            values.len(),
            grid.n_nodes(),
            "field length must match grid node count"
        );
        Field { grid, values }
    }

    pub fn constant(grid: Arc<Grid>, c: f64) -> Self {
        let n = grid.n_nodes();
        Field {
            grid,
            values: vec![c; n],
        }
    }

    /// Samples `f(theta)` at every node.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.thetas().iter().map(|&t| f(t)).collect();
        Field { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn same_grid(&self, other: &Field) -> Result<(), GeometryError> {
        if self.grid.n_cells() == other.grid.n_cells() {
            Ok(())
        } else {
            Err(GeometryError::MismatchedGrids(
                self.grid.n_cells(),
                other.grid.n_cells(),
            ))
        }
    }

    /// Value at an arbitrary angle by linear interpolation between nodes.
    pub fn value_at(&self, theta: f64) -> f64 {
        let h = self.grid.dtheta();
        let x = (theta / h).clamp(0.0, self.grid.n_cells() as f64);
        let i = (x.floor() as usize).min(self.grid.n_cells() - 1);
        let w = x - i as f64;
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }

    /// Trapezoidal L²(0, π) norm of the nodal values.
    pub fn l2_norm(&self) -> f64 {
        let h = self.grid.dtheta();
        let v = &self.values;
        let n = v.len();
        let mut acc = 0.5 * (v[0] * v[0] + v[n - 1] * v[n - 1]);
        for x in &v[1..n - 1] {
            acc += x * x;
        }
        (acc * h).sqrt()
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| v.abs().max(m))
    }

    pub(crate) fn ensure_positive(&self) -> Result<(), GeometryError> {
        for (i, &v) in self.values.iter().enumerate() {
            // Catches NaN as well: !(NaN > 0) is true.
            if !(v > 0.0) {
                return Err(GeometryError::NonPositiveRadius {
                    index: i,
                    theta: self.grid.theta(i),
                    value: v,
                });
            }
        }
        Ok(())
    }
}

// The stencils below are written in grouped difference form for two reasons
// the plain coefficient form does not deliver in floating point: they vanish
// exactly on constant input (the equilibrium-residual contract), and the two
// endpoint expressions are exact mirror images, so differentiating an even
// field yields a bitwise odd (first derivative) or even (second derivative)
// one. The double-source integrator relies on that to keep its two signals
// bitwise mirror-symmetric.

pub(crate) fn first_derivative_kernel(v: &[f64], h: f64, out: &mut [f64]) {
    let n = v.len() - 1;
    out[0] = (4.0 * (v[1] - v[0]) - (v[2] - v[0])) / (2.0 * h);
    for i in 1..n {
        out[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    out[n] = (4.0 * (v[n] - v[n - 1]) - (v[n] - v[n - 2])) / (2.0 * h);
}

pub(crate) fn second_derivative_kernel(v: &[f64], h: f64, out: &mut [f64]) {
    let n = v.len() - 1;
    let h2 = h * h;
    out[0] = ((2.0 * (v[0] - v[1]) - 3.0 * (v[1] - v[2])) + (v[2] - v[3])) / h2;
    for i in 1..n {
        out[i] = ((v[i - 1] + v[i + 1]) - 2.0 * v[i]) / h2;
    }
    out[n] = ((2.0 * (v[n] - v[n - 1]) - 3.0 * (v[n - 1] - v[n - 2])) + (v[n - 2] - v[n - 3])) / h2;
}

/// Central second-order first derivative; one-sided second-order stencils at
/// the endpoints. Exact on affine fields.
pub fn first_derivative(f: &Field) -> Field {
    let mut d = vec![0.0; f.grid.n_nodes()];
    first_derivative_kernel(&f.values, f.grid.dtheta(), &mut d);
    Field::new(f.grid.clone(), d)
}

/// Three-point second derivative at interior nodes; one-sided second-order
/// stencils at the endpoints. Exact on quadratics at interior nodes.
pub fn second_derivative(f: &Field) -> Field {
    let mut d = vec![0.0; f.grid.n_nodes()];
    second_derivative_kernel(&f.values, f.grid.dtheta(), &mut d);
    Field::new(f.grid.clone(), d)
}

/// Induced metric g = r² + r_θ² together with the radius derivatives needed
/// by the Laplace-Beltrami operator.
#[derive(Debug, Clone)]
pub struct MetricData {
    pub g: Field,
    pub r_theta: Field,
    pub r_theta_theta: Field,
}

impl MetricData {
    pub fn min_g(&self) -> f64 {
        self.g.values().iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Fills `rt`, `rtt`, `g` from nodal radius values and returns min g.
pub(crate) fn metric_kernel(r: &[f64], h: f64, rt: &mut [f64], rtt: &mut [f64], g: &mut [f64]) -> f64 {
    first_derivative_kernel(r, h, rt);
    second_derivative_kernel(r, h, rtt);
    let mut min_g = f64::INFINITY;
    for i in 0..r.len() {
        g[i] = r[i] * r[i] + rt[i] * rt[i];
        min_g = min_g.min(g[i]);
    }
    min_g
}

pub fn metric(r: &Field) -> Result<MetricData, GeometryError> {
    r.ensure_positive()?;
    let n = r.grid.n_nodes();
    let (mut rt, mut rtt, mut g) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    metric_kernel(&r.values, r.grid.dtheta(), &mut rt, &mut rtt, &mut g);
    Ok(MetricData {
        g: Field::new(r.grid.clone(), g),
        r_theta: Field::new(r.grid.clone(), rt),
        r_theta_theta: Field::new(r.grid.clone(), rtt),
    })
}

/// Laplace-Beltrami operator of the radial curve applied to a signal:
/// Δ_r s = s_θθ/g − r_θ(r + r_θθ)/g² · s_θ with g = r² + r_θ².
pub fn laplace_beltrami(s: &Field, r: &Field) -> Result<Field, GeometryError> {
    s.same_grid(r)?;
    let m = metric(r)?;
    let s_theta = first_derivative(s);
    let s_theta_theta = second_derivative(s);
    let mut out = vec![0.0; s.grid.n_nodes()];
    for i in 0..out.len() {
        let g = m.g.values()[i];
        let adv = m.r_theta.values()[i] * (r.values[i] + m.r_theta_theta.values()[i]);
        out[i] = s_theta_theta.values()[i] / g - adv * s_theta.values()[i] / (g * g);
    }
    Ok(Field::new(s.grid.clone(), out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_coarse_grid() {
        assert_eq!(make_grid(4).unwrap_err(), GeometryError::GridTooCoarse(4));
        assert!(make_grid(8).is_ok());
    }

    #[test]
    fn grid_layout() {
        let grid = make_grid(100).unwrap();
        assert_eq!(grid.n_nodes(), 101);
        assert_relative_eq!(grid.theta(50), PI / 2.0, max_relative = 1e-15);
        assert_eq!(grid.theta(100), PI);
        assert_eq!(grid.theta(0), 0.0);
        assert_relative_eq!(grid.dtheta(), PI / 100.0);
    }

    #[test]
    fn first_derivative_exact_on_affine() {
        let grid = make_grid(32).unwrap();
        let f = Field::from_fn(grid.clone(), |t| 3.0 - 2.0 * t);
        let d = first_derivative(&f);
        for &v in d.values() {
            assert_relative_eq!(v, -2.0, max_relative = 1e-12);
        }
        let c = Field::constant(grid, 7.5);
        assert!(first_derivative(&c).max_norm() <= 1e-12);
    }

    #[test]
    fn second_derivative_exact_on_quadratic() {
        let grid = make_grid(32).unwrap();
        let f = Field::from_fn(grid, |t| t * t);
        let d = second_derivative(&f);
        for (i, &v) in d.values().iter().enumerate() {
            if i > 0 && i < 32 {
                assert_relative_eq!(v, 2.0, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn derivative_converges_at_second_order() {
        let err = |n: usize| {
            let grid = make_grid(n).unwrap();
            let f = Field::from_fn(grid.clone(), |t| t.sin());
            let d = first_derivative(&f);
            d.values()
                .iter()
                .zip(grid.thetas())
                .map(|(&v, &t)| (v - t.cos()).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(200), err(400));
        let order = (e1 / e2).log2();
        println!("first_derivative error {e1:.3e} -> {e2:.3e}, order {order:.2}");
        assert!(order > 1.9, "observed order {order}");
    }

    #[test]
    fn metric_of_unit_circle() {
        let grid = make_grid(64).unwrap();
        let r = Field::constant(grid, 1.0);
        let m = metric(&r).unwrap();
        for &gi in m.g.values() {
            assert_relative_eq!(gi, 1.0, max_relative = 1e-12);
        }
        assert!(m.r_theta.max_norm() <= 1e-12);
    }

    #[test]
    fn metric_of_exponential_radius() {
        let grid = make_grid(400).unwrap();
        let r = Field::from_fn(grid.clone(), |t| (0.3 * t).exp());
        let m = metric(&r).unwrap();
        for i in 1..400 {
            let expect = (1.0 + 0.09) * (0.6 * grid.theta(i)).exp();
            assert_relative_eq!(m.g.values()[i], expect, max_relative = 1e-4);
        }
    }

    #[test]
    fn metric_rejects_nonpositive_radius() {
        let grid = make_grid(16).unwrap();
        let mut vals = vec![1.0; 17];
        vals[5] = 0.0;
        let r = Field::new(grid, vals);
        match metric(&r) {
            Err(GeometryError::NonPositiveRadius { index: 5, .. }) => {}
            other => panic!("expected NonPositiveRadius at node 5, got {other:?}"),
        }
    }

    #[test]
    fn laplace_beltrami_reduces_to_plain_diffusion() {
        let grid = make_grid(64).unwrap();
        let r = Field::constant(grid.clone(), 2.0);
        let s = Field::from_fn(grid, |t| (1.3 * t).sin() + 0.2 * t);
        let lb = laplace_beltrami(&s, &r).unwrap();
        let plain = second_derivative(&s);
        for (a, b) in lb.values().iter().zip(plain.values()) {
            assert_relative_eq!(*a, b / 4.0, max_relative = 1e-13);
        }
    }

    #[test]
    fn laplace_beltrami_annihilates_constants() {
        let grid = make_grid(100).unwrap();
        let r = Field::from_fn(grid.clone(), |t| 2.0 + 0.5 * (2.0 * t).cos());
        let s = Field::constant(grid, 3.7);
        assert!(laplace_beltrami(&s, &r).unwrap().max_norm() <= 1e-12);
    }

    // For r = 2 + cos θ and s = sin θ the operator evaluates in closed form
    // to −(2 cos θ + 5)·sin θ / (4 cos θ + 5)², with g = 5 + 4 cos θ.
    fn lb_closed_form(t: f64) -> f64 {
        -(2.0 * t.cos() + 5.0) * t.sin() / (4.0 * t.cos() + 5.0).powi(2)
    }

    #[test]
    fn laplace_beltrami_matches_closed_form() {
        let interior_err = |n: usize| {
            let grid = make_grid(n).unwrap();
            let r = Field::from_fn(grid.clone(), |t| 2.0 + t.cos());
            let s = Field::from_fn(grid.clone(), |t| t.sin());
            let lb = laplace_beltrami(&s, &r).unwrap();
            (1..n)
                .map(|i| (lb.values()[i] - lb_closed_form(grid.theta(i))).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (interior_err(100), interior_err(200));
        let order = (e1 / e2).log2();
        println!("laplace_beltrami error {e1:.3e} -> {e2:.3e}, order {order:.2}");
        assert!(e1 < 2e-4, "n=100 error {e1}");
        assert!(order >= 1.9, "observed order {order}");
    }

    #[test]
    fn derivatives_mirror_exactly() {
        // Even input -> bitwise odd first derivative and even second
        // derivative; the double-source stepper depends on this.
        let n = 64;
        let grid = make_grid(n).unwrap();
        let mut vals = vec![0.0; n + 1];
        for i in 0..=n / 2 {
            let t = grid.theta(i);
            let v = 1.0 + 0.3 * t.cos() + 0.05 * (2.0 * t).cos();
            vals[i] = v;
            vals[n - i] = v;
        }
        let f = Field::new(grid, vals);
        let d1 = first_derivative(&f);
        let d2 = second_derivative(&f);
        for i in 0..=n {
            assert_eq!(d1.values()[i], -d1.values()[n - i], "node {i}");
            assert_eq!(d2.values()[i], d2.values()[n - i], "node {i}");
        }
    }
}
