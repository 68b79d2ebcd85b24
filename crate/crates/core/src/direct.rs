//! Euler-like direct method: replace the fractional derivative by left
//! Grünwald-Letnikov sums, the functional by a left-endpoint rectangle rule
//! over the nodes `1..=n`, and look for stationary points of the resulting
//! function of the interior values.

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::linalg::solve_dense;
use crate::operators::{gl_weights, GlWeights, Mesh, SampledCurve};
use crate::specfun::{gamma_unchecked, gen_binomial};

/// A Lagrangian `L(t, x, xdot, d)` where `d` stands for the left fractional
/// derivative of `x`, together with its three partial derivatives.
pub trait Lagrangian {
    fn value(&self, t: f64, x: f64, xdot: f64, d: f64) -> f64;
    fn dx(&self, t: f64, x: f64, xdot: f64, d: f64) -> f64;
    fn dxdot(&self, t: f64, x: f64, xdot: f64, d: f64) -> f64;
    fn dd(&self, t: f64, x: f64, xdot: f64, d: f64) -> f64;

    /// Whether `L` depends on `xdot`. When false, `dxdot` must vanish.
    fn uses_xdot(&self) -> bool {
        true
    }
}

type Partial = Box<dyn Fn(f64, f64, f64, f64) -> f64 + Send + Sync>;

/// A [`Lagrangian`] assembled from closures.
pub struct FnLagrangian {
    pub value: Partial,
    pub dx: Partial,
    pub dxdot: Partial,
    pub dd: Partial,
    pub uses_xdot: bool,
}

impl Lagrangian for FnLagrangian {
    fn value(&self, t: f64, x: f64, xdot: f64, d: f64) -> f64 {
        (self.value)(t, x, xdot, d)
    }
    fn dx(&self, t: f64, x: f64, xdot: f64, d: f64) -> f64 {
        (self.dx)(t, x, xdot, d)
    }
    fn dxdot(&self, t: f64, x: f64, xdot: f64, d: f64) -> f64 {
        (self.dxdot)(t, x, xdot, d)
    }
    fn dd(&self, t: f64, x: f64, xdot: f64, d: f64) -> f64 {
        (self.dd)(t, x, xdot, d)
    }
    fn uses_xdot(&self) -> bool {
        self.uses_xdot
    }
}

/// `(d - 2 t^1.5 / Γ(2.5))^2`, minimised by `x = t^2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Example1;

fn example1_target(t: f64) -> f64 {
    2.0 / gamma_unchecked(2.5) * t.powf(1.5)
}

impl Lagrangian for Example1 {
    fn value(&self, t: f64, _x: f64, _xdot: f64, d: f64) -> f64 {
        (d - example1_target(t)).powi(2)
    }
    fn dx(&self, _: f64, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn dxdot(&self, _: f64, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn dd(&self, t: f64, _x: f64, _xdot: f64, d: f64) -> f64 {
        2.0 * (d - example1_target(t))
    }
    fn uses_xdot(&self) -> bool {
        false
    }
}

/// `d - xdot^2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Example2;

impl Lagrangian for Example2 {
    fn value(&self, _t: f64, _x: f64, xdot: f64, d: f64) -> f64 {
        d - xdot * xdot
    }
    fn dx(&self, _: f64, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn dxdot(&self, _t: f64, _x: f64, xdot: f64, _d: f64) -> f64 {
        -2.0 * xdot
    }
    fn dd(&self, _: f64, _: f64, _: f64, _: f64) -> f64 {
        1.0
    }
}

/// `(d - phi(t))^4` with `phi` the half derivative of `16 t^5 - 20 t^3 + 5 t`,
/// which is therefore the minimiser.
#[derive(Debug, Clone, Copy, Default)]
pub struct Example3;

/// Half-order derivative of `16 t^5 - 20 t^3 + 5 t`.
pub fn example3_phi(t: f64) -> f64 {
    16.0 * gamma_unchecked(6.0) / gamma_unchecked(5.5) * t.powf(4.5)
        - 20.0 * gamma_unchecked(4.0) / gamma_unchecked(3.5) * t.powf(2.5)
        + 5.0 / gamma_unchecked(1.5) * t.sqrt()
}

pub fn example3_exact(t: f64) -> f64 {
    16.0 * t.powi(5) - 20.0 * t.powi(3) + 5.0 * t
}

impl Lagrangian for Example3 {
    fn value(&self, t: f64, _x: f64, _xdot: f64, d: f64) -> f64 {
        (d - example3_phi(t)).powi(4)
    }
    fn dx(&self, _: f64, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn dxdot(&self, _: f64, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn dd(&self, t: f64, _x: f64, _xdot: f64, d: f64) -> f64 {
        4.0 * (d - example3_phi(t)).powi(3)
    }
    fn uses_xdot(&self) -> bool {
        false
    }
}

/// Minimise `int_a^b L dt` subject to `x(a) = x_a`, `x(b) = x_b`.
pub struct DirectProblem {
    pub a: f64,
    pub b: f64,
    pub x_a: f64,
    pub x_b: f64,
    pub alpha: f64,
    pub lagrangian: Box<dyn Lagrangian + Send + Sync>,
}

impl DirectProblem {
    pub fn new(
        a: f64,
        b: f64,
        x_a: f64,
        x_b: f64,
        alpha: f64,
        lagrangian: Box<dyn Lagrangian + Send + Sync>,
    ) -> Result<Self> {
        if !(a < b) {
            return Err(invalid(format!("interval needs a < b, got [{a}, {b}]")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(invalid(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        Ok(DirectProblem { a, b, x_a, x_b, alpha, lagrangian })
    }

    pub fn example1() -> Self {
        DirectProblem { a: 0.0, b: 1.0, x_a: 0.0, x_b: 1.0, alpha: 0.5, lagrangian: Box::new(Example1) }
    }

    /// Example 2 at order `alpha`; its stationary curve is
    /// [`crate::indirect::analytic_solution_example2`].
    pub fn example2(alpha: f64) -> Result<Self> {
        DirectProblem::new(0.0, 1.0, 0.0, 1.0, alpha, Box::new(Example2))
    }

    pub fn example3() -> Self {
        DirectProblem { a: 0.0, b: 1.0, x_a: 0.0, x_b: 1.0, alpha: 0.5, lagrangian: Box::new(Example3) }
    }
}

impl std::fmt::Debug for DirectProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DirectProblem")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("x_a", &self.x_a)
            .field("x_b", &self.x_b)
            .field("alpha", &self.alpha)
            .finish_non_exhaustive()
    }
}

/// The discrete functional `Psi` of the `n - 1` interior values and its
/// stationarity conditions.
pub struct Discretization<'a> {
    problem: &'a DirectProblem,
    mesh: Mesh,
    weights: GlWeights,
}

struct NodeState {
    x: Vec<f64>,
    xdot: Vec<f64>,
    d: Vec<f64>,
}

pub fn discretize(problem: &DirectProblem, n: usize) -> Result<Discretization<'_>> {
    if n < 2 {
        return Err(invalid(format!("direct method needs n >= 2, got {n}")));
    }
    let mesh = Mesh::new(problem.a, problem.b, n)?;
    let weights = gl_weights(problem.alpha, n)?;
    Ok(Discretization { problem, mesh, weights })
}

impl Discretization<'_> {
    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    /// Number of unknowns, `n - 1`.
    pub fn unknowns(&self) -> usize {
        self.mesh.n() - 1
    }

    /// The full node vector `x_0, ..., x_n` with the boundary values attached.
    pub fn full(&self, interior: &[f64]) -> Vec<f64> {
        assert_eq!(interior.len(), self.unknowns(), "wrong number of interior values");
        let mut x = Vec::with_capacity(interior.len() + 2);
        x.push(self.problem.x_a);
        x.extend_from_slice(interior);
        x.push(self.problem.x_b);
        x
    }

    fn state(&self, interior: &[f64]) -> NodeState {
        let x = self.full(interior);
        let h = self.mesh.h();
        let n = self.mesh.n();
        let mut xdot = vec![0.0; n + 1];
        let mut d = vec![0.0; n + 1];
        for i in 1..=n {
            xdot[i] = (x[i] - x[i - 1]) / h;
            d[i] = self.weights.backward(&x, i, h);
        }
        NodeState { x, xdot, d }
    }

    /// `Psi = h sum_{i=1..n} L(t_i, x_i, (x_i - x_{i-1}) / h, D_i)`.
    pub fn psi(&self, interior: &[f64]) -> f64 {
        let s = self.state(interior);
        let l = &self.problem.lagrangian;
        let h = self.mesh.h();
        (1..=self.mesh.n()).map(|i| h * l.value(self.mesh.node(i), s.x[i], s.xdot[i], s.d[i])).sum()
    }

    /// `(1/h) dPsi/dx_j` for `j = 1..n-1`.
    pub fn residual(&self, interior: &[f64]) -> Vec<f64> {
        let s = self.state(interior);
        let l = &self.problem.lagrangian;
        let n = self.mesh.n();
        let h = self.mesh.h();
        let t = |i| self.mesh.node(i);
        let ld: Vec<f64> = (0..=n).map(|i| l.dd(t(i), s.x[i], s.xdot[i], s.d[i])).collect();
        let lv: Vec<f64> = if l.uses_xdot() {
            (0..=n).map(|i| l.dxdot(t(i), s.x[i], s.xdot[i], s.d[i])).collect()
        } else {
            vec![0.0; n + 1]
        };
        (1..n)
            .map(|j| l.dx(t(j), s.x[j], s.xdot[j], s.d[j]) + self.weights.forward(&ld, j, h) + (lv[j] - lv[j + 1]) / h)
            .collect()
    }

    /// Forward-difference Jacobian of [`Discretization::residual`] with step
    /// `sqrt(eps) (1 + |x_k|)`.
    pub fn jacobian_fd(&self, interior: &[f64], r0: &[f64]) -> DMatrix<f64> {
        let m = interior.len();
        let mut jac = DMatrix::zeros(m, m);
        let mut probe = interior.to_vec();
        for k in 0..m {
            let step = f64::EPSILON.sqrt() * (1.0 + interior[k].abs());
            probe[k] = interior[k] + step;
            let r = self.residual(&probe);
            for i in 0..m {
                jac[(i, k)] = (r[i] - r0[i]) / step;
            }
            probe[k] = interior[k];
        }
        jac
    }

    fn curve(&self, interior: &[f64]) -> Result<SampledCurve> {
        SampledCurve::new(self.mesh, self.full(interior))
    }

    /// Linear interpolant of the boundary values on the interior nodes.
    pub fn initial_guess(&self) -> Vec<f64> {
        let p = self.problem;
        (1..self.mesh.n())
            .map(|i| {
                let s = (self.mesh.node(i) - p.a) / (p.b - p.a);
                p.x_a + s * (p.x_b - p.x_a)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectOptions {
    pub newton_tol: f64,
    pub max_iter: usize,
    /// Treat the stationarity system as affine and solve it in one step.
    pub linear: bool,
}

impl Default for DirectOptions {
    fn default() -> Self {
        DirectOptions { newton_tol: 1e-10, max_iter: 100, linear: false }
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Solves the stationarity system on `n` subintervals, starting from the
/// linear interpolant of the boundary values.
///
/// If the residual already vanishes at the starting point (for instance for
/// a Lagrangian that ignores `x`), the starting point is returned as is.
pub fn solve_direct(problem: &DirectProblem, n: usize, opts: DirectOptions) -> Result<SampledCurve> {
    let disc = discretize(problem, n)?;
    let mut x = disc.initial_guess();
    let mut r = disc.residual(&x);
    let mut norm = inf_norm(&r);
    if norm < opts.newton_tol || x.is_empty() {
        return disc.curve(&x);
    }
    if opts.linear {
        // Jacobian columns by unit probes are exact for an affine residual.
        let m = x.len();
        let mut jac = DMatrix::zeros(m, m);
        let mut probe = x.clone();
        for k in 0..m {
            probe[k] += 1.0;
            let rk = disc.residual(&probe);
            for i in 0..m {
                jac[(i, k)] = rk[i] - r[i];
            }
            probe[k] = x[k];
        }
        let step = solve_dense(jac, DVector::from_vec(r))?;
        for (xi, si) in x.iter_mut().zip(step.iter()) {
            *xi -= si;
        }
        return disc.curve(&x);
    }
    for _ in 0..opts.max_iter {
        let jac = disc.jacobian_fd(&x, &r);
        let step = solve_dense(jac, DVector::from_row_slice(&r))?;
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=30 {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, si)| xi - lambda * si).collect();
            let rt = disc.residual(&trial);
            let nt = inf_norm(&rt);
            if nt.is_finite() && nt < norm {
                accepted = Some((trial, rt, nt));
                break;
            }
            lambda *= 0.5;
        }
        let Some((trial, rt, nt)) = accepted else {
            return Err(Error::NoConvergence { iterations: opts.max_iter, residual: norm });
        };
        x = trial;
        r = rt;
        norm = nt;
        if norm < opts.newton_tol {
            return disc.curve(&x);
        }
    }
    Err(Error::NoConvergence { iterations: opts.max_iter, residual: norm })
}

/// Example 1's linear system as written out by hand: entry `(j, m)` is
/// `sum_{i=max(j,m)..n} A_{i-j} A_{i-m}` with `A_i = (-1)^i h^1.5 binom(0.5, i)`.
pub fn example1_system(n: usize) -> Result<(DMatrix<f64>, DVector<f64>)> {
    if n < 2 {
        return Err(invalid(format!("direct method needs n >= 2, got {n}")));
    }
    let h = 1.0 / n as f64;
    let coef: Vec<f64> = (0..=n)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sign * h.powf(1.5) * gen_binomial(0.5, i)
        })
        .collect();
    let (x0, xn) = (0.0, 1.0);
    let t = |i: usize| if i == n { 1.0 } else { i as f64 * h };
    let m = n - 1;
    let mat = DMatrix::from_fn(m, m, |r, c| {
        let (j, k) = (r + 1, c + 1);
        (j.max(k)..=n).map(|i| coef[i - j] * coef[i - k]).sum()
    });
    let rhs = DVector::from_fn(m, |r, _| {
        let j = r + 1;
        let forcing: f64 = (0..=n - j).map(|k| coef[k] * example1_target(t(k + j))).sum();
        let tail: f64 = (0..=n - j).map(|k| coef[k] * coef[k + j]).sum();
        h * h * forcing - coef[n - j] * coef[0] * xn - x0 * tail
    });
    Ok((mat, rhs))
}

/// Example 2's tridiagonal system `[-1, 2, -1] x = b` at `alpha = 0.5`.
pub fn example2_system(n: usize) -> Result<(DMatrix<f64>, DVector<f64>)> {
    if n < 2 {
        return Err(invalid(format!("direct method needs n >= 2, got {n}")));
    }
    let h = 1.0 / n as f64;
    let (x0, xn) = (0.0, 1.0);
    let m = n - 1;
    let mat = DMatrix::from_fn(m, m, |r, c| match r.abs_diff(c) {
        0 => 2.0,
        1 => -1.0,
        _ => 0.0,
    });
    let rhs = DVector::from_fn(m, |r, _| {
        let i = r + 1;
        let s: f64 = (0..=n - i)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * h.sqrt() * gen_binomial(0.5, k)
            })
            .sum();
        let mut b = 0.5 * h * s;
        if i == 1 {
            b += x0;
        }
        if i == n - 1 {
            b += xn;
        }
        b
    });
    Ok((mat, rhs))
}

/// Solves one of the hand-assembled systems and attaches the boundary values
/// `x(0) = 0`, `x(1) = 1`.
pub fn solve_system(n: usize, system: (DMatrix<f64>, DVector<f64>)) -> Result<SampledCurve> {
    let (mat, rhs) = system;
    let sol = solve_dense(mat, rhs)?;
    let mut values = Vec::with_capacity(n + 1);
    values.push(0.0);
    values.extend(sol.iter());
    values.push(1.0);
    SampledCurve::new(Mesh::new(0.0, 1.0, n)?, values)
}

/// Example 3's nonlinear conditions
/// `sum_{i=j..n} w_{i-j} (h^-0.5 sum_k w_k x_{i-k} - phi(t_i))^3`, `j = 1..n-1`,
/// with `x_0 = 0` and `x_n = 1`.
pub fn example3_residual(interior: &[f64], n: usize) -> Result<Vec<f64>> {
    if n < 2 || interior.len() != n - 1 {
        return Err(invalid(format!("expected {} interior values for n = {n}", n.saturating_sub(1))));
    }
    let h = 1.0 / n as f64;
    let w = gl_weights(0.5, n)?;
    let w = w.as_slice();
    let mut x = Vec::with_capacity(n + 1);
    x.push(0.0);
    x.extend_from_slice(interior);
    x.push(1.0);
    let t = |i: usize| if i == n { 1.0 } else { i as f64 * h };
    let cubes: Vec<f64> = (0..=n)
        .map(|i| {
            let d: f64 = (0..=i).map(|k| w[k] * x[i - k]).sum::<f64>() / h.sqrt();
            (d - example3_phi(t(i))).powi(3)
        })
        .collect();
    Ok((1..n).map(|j| (j..=n).map(|i| w[i - j] * cubes[i]).sum()).collect())
}

/// Node-wise residual of the fractional Euler-Lagrange equation
/// `dL/dx + D_right[dL/dd] - d/dt dL/dxdot`, with the left derivative inside
/// the partials and the right derivative taken by Grünwald-Letnikov sums,
/// and `xdot`, `d/dt` by central differences (one-sided at the ends).
pub fn euler_lagrange_residual(curve: &SampledCurve, problem: &DirectProblem) -> Result<SampledCurve> {
    let mesh = *curve.mesh();
    let n = mesh.n();
    let h = mesh.h();
    let x = curve.values();
    let weights = gl_weights(problem.alpha, n)?;
    let deriv = |v: &[f64], i: usize| {
        if n == 0 {
            0.0
        } else if i == 0 {
            (v[1] - v[0]) / h
        } else if i == n {
            (v[n] - v[n - 1]) / h
        } else {
            (v[i + 1] - v[i - 1]) / (2.0 * h)
        }
    };
    let l = &problem.lagrangian;
    let xdot: Vec<f64> = (0..=n).map(|i| deriv(x, i)).collect();
    let d: Vec<f64> = (0..=n).map(|i| weights.backward(x, i, h)).collect();
    let args = |i: usize| (mesh.node(i), x[i], xdot[i], d[i]);
    let ld: Vec<f64> = (0..=n)
        .map(|i| {
            let (t, a, b, c) = args(i);
            l.dd(t, a, b, c)
        })
        .collect();
    let lv: Vec<f64> = (0..=n)
        .map(|i| {
            let (t, a, b, c) = args(i);
            l.dxdot(t, a, b, c)
        })
        .collect();
    let values = (0..=n)
        .map(|i| {
            let (t, a, b, c) = args(i);
            let mut r = l.dx(t, a, b, c) + weights.forward(&ld, i, h);
            if l.uses_xdot() {
                r -= deriv(&lv, i);
            }
            r
        })
        .collect();
    SampledCurve::new(mesh, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indirect::analytic_solution_example2;
    use crate::operators::max_error;

    fn zero_lagrangian() -> Box<dyn Lagrangian + Send + Sync> {
        Box::new(FnLagrangian {
            value: Box::new(|_, _, _, _| 0.0),
            dx: Box::new(|_, _, _, _| 0.0),
            dxdot: Box::new(|_, _, _, _| 0.0),
            dd: Box::new(|_, _, _, _| 0.0),
            uses_xdot: false,
        })
    }

    #[test]
    fn zero_lagrangian_psi_and_guess() {
        let p = DirectProblem::new(0.0, 1.0, 0.0, 0.0, 0.5, zero_lagrangian()).unwrap();
        let d = discretize(&p, 6).unwrap();
        assert_eq!(d.psi(&[0.0; 5]), 0.0);
        let c = solve_direct(&p, 6, DirectOptions::default()).unwrap();
        assert!(c.values().iter().all(|&v| v == 0.0));
        assert!(discretize(&p, 1).is_err());
    }

    #[test]
    fn two_node_quadratic_vertex() {
        // L = (d - 1)^2 on [0, 1], x(0) = 0, x(1) = 0, n = 2: only the i = 1
        // term depends on x_1 through d_1 = h^-a x_1, and i = 2 through
        // d_2 = h^-a (w_1 x_1); the vertex solves a 1x1 linear equation.
        let lag = FnLagrangian {
            value: Box::new(|_, _, _, d| (d - 1.0).powi(2)),
            dx: Box::new(|_, _, _, _| 0.0),
            dxdot: Box::new(|_, _, _, _| 0.0),
            dd: Box::new(|_, _, _, d| 2.0 * (d - 1.0)),
            uses_xdot: false,
        };
        let p = DirectProblem::new(0.0, 1.0, 0.0, 0.0, 0.5, Box::new(lag)).unwrap();
        let c = solve_direct(&p, 2, DirectOptions { linear: true, ..Default::default() }).unwrap();
        let s = 0.5f64.powf(-0.5);
        let w1 = -0.5;
        // minimise (s x - 1)^2 + (s w1 x - 1)^2
        let vertex = s * (1.0 + w1) / (s * s * (1.0 + w1 * w1));
        assert!((c.values()[1] - vertex).abs() < 1e-13);
    }

    #[test]
    fn example1_residual_is_affine() {
        let p = DirectProblem::example1();
        let d = discretize(&p, 8).unwrap();
        let u: Vec<f64> = (0..7).map(|i| 0.1 * i as f64).collect();
        let v: Vec<f64> = (0..7).map(|i| (i as f64).cos()).collect();
        let mid: Vec<f64> = u.iter().zip(&v).map(|(a, b)| 0.5 * (a + b)).collect();
        let (ru, rv, rm) = (d.residual(&u), d.residual(&v), d.residual(&mid));
        for i in 0..7 {
            assert!((rm[i] - 0.5 * (ru[i] + rv[i])).abs() < 1e-12 * (1.0 + rm[i].abs()));
        }
    }

    #[test]
    fn example1_matches_hand_assembly() {
        for n in [5, 12] {
            let generic =
                solve_direct(&DirectProblem::example1(), n, DirectOptions { linear: true, ..Default::default() })
                    .unwrap();
            let hand = solve_system(n, example1_system(n).unwrap()).unwrap();
            for (g, h) in generic.values().iter().zip(hand.values()) {
                assert!((g - h).abs() < 1e-10, "n = {n}: {g} vs {h}");
            }
        }
    }

    #[test]
    fn example2_matches_hand_assembly_and_converges() {
        let p = DirectProblem::example2(0.5).unwrap();
        let n = 16;
        let generic = solve_direct(&p, n, DirectOptions { linear: true, ..Default::default() }).unwrap();
        let hand = solve_system(n, example2_system(n).unwrap()).unwrap();
        for (g, h) in generic.values().iter().zip(hand.values()) {
            assert!((g - h).abs() < 1e-10);
        }
        let exact = generic.mesh().sample(|t| analytic_solution_example2(0.5, t));
        assert!(max_error(&generic, &exact).unwrap() < 0.05);
    }

    #[test]
    fn example2_system_shape() {
        let (m, b) = example2_system(6).unwrap();
        assert_eq!(m[(2, 2)], 2.0);
        assert_eq!(m[(2, 3)], -1.0);
        assert_eq!(m[(0, 3)], 0.0);
        // the last entry carries x_n = 1 on top of the sum
        let h: f64 = 1.0 / 6.0;
        let tail = 0.5 * h * (h.sqrt() * (1.0 - 0.5));
        assert!((b[4] - tail - 1.0).abs() < 1e-15);
    }

    #[test]
    fn example1_system_corner_and_first_coefficient() {
        let n = 7;
        let (m, _) = example1_system(n).unwrap();
        let h: f64 = 1.0 / n as f64;
        let a: Vec<f64> =
            (0..=n).map(|i| (if i % 2 == 0 { 1.0 } else { -1.0 }) * h.powf(1.5) * gen_binomial(0.5, i)).collect();
        assert_eq!(a[0], h.powf(1.5));
        let s: f64 = (0..n).map(|i| a[i] * a[i]).sum();
        assert!((m[(0, 0)] - s).abs() < 1e-16);
    }

    #[test]
    fn example3_residual_vanishes_under_refinement() {
        let norm = |n: usize| {
            let x: Vec<f64> = (1..n).map(|i| example3_exact(i as f64 / n as f64)).collect();
            inf_norm(&example3_residual(&x, n).unwrap())
        };
        assert!(norm(40) < norm(20) && norm(20) < norm(10));
        assert!(example3_residual(&[0.0; 3], 5).is_err());
    }

    #[test]
    fn example3_generic_residual_is_scaled_literal_one() {
        let p = DirectProblem::example3();
        let n = 9;
        let d = discretize(&p, n).unwrap();
        let x: Vec<f64> = (1..n).map(|i| (i as f64 * 0.3).sin()).collect();
        let generic = d.residual(&x);
        let literal = example3_residual(&x, n).unwrap();
        let scale = 4.0 * (1.0 / n as f64).powf(-0.5);
        for (g, l) in generic.iter().zip(&literal) {
            assert!((g - scale * l).abs() <= 1e-10 * g.abs().max(1.0));
        }
    }

    #[test]
    fn boundary_values_bit_equal() {
        let p = DirectProblem::new(0.0, 2.0, 0.3, -1.7, 0.4, Box::new(Example2)).unwrap();
        let c = solve_direct(&p, 10, DirectOptions { linear: true, ..Default::default() }).unwrap();
        assert_eq!(c.values()[0], 0.3);
        assert_eq!(c.values()[10], -1.7);
    }

    #[test]
    fn el_residual_of_zero_lagrangian() {
        let p = DirectProblem::new(0.0, 1.0, 0.0, 1.0, 0.5, zero_lagrangian()).unwrap();
        let mesh = Mesh::new(0.0, 1.0, 10).unwrap();
        let r = euler_lagrange_residual(&mesh.sample(|t| t * t), &p).unwrap();
        assert!(r.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn newton_reports_nonconvergence() {
        let opts = DirectOptions { max_iter: 1, newton_tol: 1e-300, linear: false };
        assert!(matches!(solve_direct(&DirectProblem::example3(), 10, opts), Err(Error::NoConvergence { .. })));
    }
}
