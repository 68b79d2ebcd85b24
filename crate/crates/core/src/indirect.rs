//! Indirect methods. The fractional derivative in a variational problem is
//! replaced by one of the two expansions, giving either a classical
//! higher-order problem or an optimal control problem whose Hamiltonian
//! system is a linear two-point boundary value problem.
//!
//! State layout for the Hamiltonian systems of order `N`: index 0 is `x`,
//! `p - 1` is `V_p` (`p = 2..=N`), `N` is `lambda_1` and `N + p - 1` is
//! `lambda_p`.

use std::collections::HashSet;

use crate::error::{invalid, Error, Result};
use crate::expansions::{integer_expansion_coeff, MomentCoeffs};
use crate::functions::DerivativeBundle;
use crate::linalg::BandMatrix;
use crate::operators::{Mesh, SampledCurve};
use crate::specfun::{gamma_unchecked, gen_binomial};

/// Stationary curve of `int_0^1 (D^alpha x - xdot^2) dt`, `x(0) = 0`, `x(1) = 1`.
pub fn analytic_solution_example2(alpha: f64, t: f64) -> f64 {
    let c = 1.0 / (2.0 * gamma_unchecked(3.0 - alpha));
    -c * (1.0 - t).powf(2.0 - alpha) + (1.0 - c) * t + c
}

/// Minimiser `t^alpha / Γ(alpha + 1)` of `int_0^1 (D^alpha x - 1)^2 dt`.
pub fn exact_solution_example4(alpha: f64, t: f64) -> f64 {
    t.powf(alpha) / gamma_unchecked(alpha + 1.0)
}

/// `x(1)` for the Example 4 problem.
pub fn example4_right_value(alpha: f64) -> f64 {
    1.0 / gamma_unchecked(alpha + 1.0)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

/// `x(t) = M1 t^(2-alpha) + M2 t`, the solution of Example 2 after the
/// integer-order expansion of order `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegerClosedForm {
    pub alpha: f64,
    pub order: usize,
    pub m1: f64,
    pub m2: f64,
}

pub fn solve_example2_integer(alpha: f64, order: usize) -> Result<IntegerClosedForm> {
    check_alpha(alpha)?;
    let s: f64 = (0..=order)
        .map(|n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * gamma_unchecked(n as f64 + 1.0 - alpha) * integer_expansion_coeff(alpha, n)
        })
        .sum();
    let m1 = -s / (2.0 * gamma_unchecked(3.0 - alpha));
    Ok(IntegerClosedForm { alpha, order, m1, m2: 1.0 - m1 })
}

impl IntegerClosedForm {
    pub fn eval(&self, t: f64) -> f64 {
        self.m1 * t.powf(2.0 - self.alpha) + self.m2 * t
    }
}

impl DerivativeBundle for IntegerClosedForm {
    fn max_order(&self) -> usize {
        usize::MAX
    }

    fn derivative(&self, k: usize, t: f64) -> f64 {
        let nu = 2.0 - self.alpha;
        let falling: f64 = (0..k).map(|j| nu - j as f64).product();
        let lin = match k {
            0 => self.m2 * t,
            1 => self.m2,
            _ => 0.0,
        };
        self.m1 * falling * t.powf(nu - k as f64) + lin
    }
}

/// Solution of Example 2 after the moment expansion of order `N`:
/// `x(t) = M t^(2-alpha) + sum_p k_p t^p + c t`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentClosedForm {
    coeffs: MomentCoeffs,
    m: f64,
    powers: Vec<(usize, f64)>,
    linear: f64,
}

pub fn solve_example2_moment_closed(alpha: f64, order: usize) -> Result<MomentClosedForm> {
    if order < 2 {
        return Err(invalid(format!("moment route needs N >= 2, got {order}")));
    }
    let coeffs = MomentCoeffs::new(alpha, order)?;
    let (a, b) = (coeffs.a(), coeffs.b());
    let mut sum_m = 0.0;
    let mut powers = Vec::with_capacity(order - 1);
    for (p, c) in coeffs.c_iter() {
        let denom = 2.0 - p as f64 - alpha;
        assert!(denom != 0.0, "2 - p - alpha vanished");
        sum_m += c * (1.0 - p as f64) / ((1.0 - alpha) * denom);
        powers.push((p, -c / (2.0 * p as f64 * denom)));
    }
    let m = (b - a / (1.0 - alpha) - sum_m) / (2.0 * (2.0 - alpha));
    let linear = 1.0 - m - powers.iter().map(|&(_, k)| k).sum::<f64>();
    Ok(MomentClosedForm { coeffs, m, powers, linear })
}

impl MomentClosedForm {
    pub fn coeffs(&self) -> &MomentCoeffs {
        &self.coeffs
    }

    /// `M(alpha, N)`.
    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn eval(&self, t: f64) -> f64 {
        let alpha = self.coeffs.alpha();
        self.m * t.powf(2.0 - alpha)
            + self.powers.iter().map(|&(p, k)| k * t.powi(p as i32)).sum::<f64>()
            + self.linear * t
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let alpha = self.coeffs.alpha();
        self.m * (2.0 - alpha) * t.powf(1.0 - alpha)
            + self.powers.iter().map(|&(p, k)| k * p as f64 * t.powi(p as i32 - 1)).sum::<f64>()
            + self.linear
    }

    /// Multiplier `lambda_p(t) = -C_p (t^(2-p-alpha) - 1) / (2 - p - alpha)`,
    /// which vanishes at `t = 1`.
    pub fn lambda_p(&self, p: usize, t: f64) -> f64 {
        let e = 2.0 - p as f64 - self.coeffs.alpha();
        -self.coeffs.c(p) * (t.powf(e) - 1.0) / e
    }
}

pub type Rhs = Box<dyn Fn(f64, &[f64], &mut [f64]) + Send + Sync>;

/// First-order system `y' = f(t, y)` on `[a, b]` with some components fixed
/// at `a` and the others at `b`.
pub struct TpBvpSystem {
    dim: usize,
    a: f64,
    b: f64,
    rhs: Rhs,
    left: Vec<(usize, f64)>,
    right: Vec<(usize, f64)>,
}

impl TpBvpSystem {
    pub fn new(
        dim: usize,
        (a, b): (f64, f64),
        rhs: Rhs,
        left: Vec<(usize, f64)>,
        right: Vec<(usize, f64)>,
    ) -> Result<Self> {
        if !(a < b) {
            return Err(invalid(format!("interval needs a < b, got [{a}, {b}]")));
        }
        if left.len() + right.len() != dim {
            return Err(invalid(format!(
                "{} boundary conditions for a system of dimension {dim}",
                left.len() + right.len()
            )));
        }
        for side in [&left, &right] {
            let mut seen = HashSet::new();
            for &(i, _) in side.iter() {
                if i >= dim || !seen.insert(i) {
                    return Err(invalid(format!("boundary index {i} repeated or out of range")));
                }
            }
        }
        Ok(TpBvpSystem { dim, a, b, rhs, left, right })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn left_conditions(&self) -> &[(usize, f64)] {
        &self.left
    }

    pub fn right_conditions(&self) -> &[(usize, f64)] {
        &self.right
    }

    pub fn eval(&self, t: f64, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        (self.rhs)(t, y, &mut out);
        out
    }
}

impl std::fmt::Debug for TpBvpSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TpBvpSystem")
            .field("dim", &self.dim)
            .field("interval", &(self.a, self.b))
            .field("left", &self.left)
            .field("right", &self.right)
            .finish_non_exhaustive()
    }
}

fn moment_tables(alpha: f64, order: usize) -> Result<(f64, f64, Vec<f64>)> {
    if order < 2 {
        return Err(invalid(format!("moment route needs N >= 2, got {order}")));
    }
    let c = MomentCoeffs::new(alpha, order)?;
    // cp[p] = C(alpha, p), with cp[0] = cp[1] = 0 as padding
    let mut cp = vec![0.0; order + 1];
    for (p, v) in c.c_iter() {
        cp[p] = v;
    }
    Ok((c.a(), c.b(), cp))
}

type Conditions = Vec<(usize, f64)>;

fn moment_boundaries(order: usize, x0: f64, x1: f64) -> (Conditions, Conditions) {
    let mut left = vec![(0, x0)];
    left.extend((2..=order).map(|p| (p - 1, 0.0)));
    let mut right = vec![(0, x1)];
    right.extend((2..=order).map(|p| (order + p - 1, 0.0)));
    (left, right)
}

/// Hamiltonian system of Example 2 under the moment expansion of order `N`.
pub fn assemble_tpbvp_example2(alpha: f64, order: usize) -> Result<TpBvpSystem> {
    let (a, b, cp) = moment_tables(alpha, order)?;
    let n = order;
    let rhs: Rhs = Box::new(move |t, y, out| {
        let lam1 = y[n];
        out[0] = 0.5 * b * t.powf(1.0 - alpha) - 0.5 * lam1;
        let mut dlam1 = a * t.powf(-alpha);
        for p in 2..=n {
            let tp = t.powi(p as i32 - 2);
            out[p - 1] = (1.0 - p as f64) * tp * y[0];
            dlam1 -= (1.0 - p as f64) * tp * y[n + p - 1];
            out[n + p - 1] = -cp[p] * t.powf(1.0 - p as f64 - alpha);
        }
        out[n] = dlam1;
    });
    let (left, right) = moment_boundaries(n, 0.0, 1.0);
    TpBvpSystem::new(2 * n, (0.0, 1.0), rhs, left, right)
}

/// Hamiltonian system of Example 4 under the moment expansion of order `N`.
/// The right-hand side is singular at `t = 0`.
pub fn assemble_tpbvp_example4(alpha: f64, order: usize) -> Result<TpBvpSystem> {
    let (a, b, cp) = moment_tables(alpha, order)?;
    let n = order;
    let rhs: Rhs = Box::new(move |t, y, out| {
        let (x, lam1) = (y[0], y[n]);
        let mut dx = -a / b / t * x + 0.5 / (b * b) * t.powf(2.0 * alpha - 2.0) * lam1 + t.powf(alpha - 1.0) / b;
        let mut dlam1 = a / b / t * lam1;
        for p in 2..=n {
            let tp = t.powi(p as i32 - 2);
            let t_neg = t.powi(-(p as i32));
            dx += cp[p] / b * t_neg * y[p - 1];
            out[p - 1] = (1.0 - p as f64) * tp * x;
            dlam1 -= (1.0 - p as f64) * tp * y[n + p - 1];
            out[n + p - 1] = -cp[p] / b * t_neg * lam1;
        }
        out[0] = dx;
        out[n] = dlam1;
    });
    let (left, right) = moment_boundaries(n, 0.0, example4_right_value(alpha));
    TpBvpSystem::new(2 * n, (0.0, 1.0), rhs, left, right)
}

/// Collocation grid: geometric steps `q (t - a)` away from `a + eps` until
/// they reach the mesh step, then every mesh node.
fn collocation_grid(mesh: &Mesh, start: f64) -> Vec<f64> {
    let (a, h) = (mesh.a(), mesh.h());
    let q = (10.0 / mesh.n() as f64).min(0.05);
    let mut grid = vec![start];
    let mut t = start;
    if start > a {
        while q * (t - a) < h {
            t += q * (t - a);
            grid.push(t);
        }
    }
    let tol = 1e-12 * (mesh.b() - a);
    grid.extend(mesh.nodes().filter(|&node| node > start + tol));
    grid.sort_by(|x, y| x.total_cmp(y));
    grid.dedup_by(|x, y| (*x - *y).abs() <= tol);
    grid
}

/// Solves a linear two-point boundary value problem by the box scheme
///
/// `(y_{j+1} - y_j) / dt = F(t_m) (y_j + y_{j+1}) / 2 + g(t_m)`
///
/// on `[a + eps, b]`, with `f(t, y) = F(t) y + g(t)` recovered by probing.
/// The grid is the mesh refined geometrically near `a + eps`.
///
/// With `eps > 0` each left condition `y_c(a) = v` is moved to `a + eps` as
/// one implicit Euler step, `y_c(a+eps) - eps f_c(a+eps, y) = v`. Mesh nodes
/// below `a + eps` are filled by linear interpolation from the left datum
/// (or extrapolation, for components with no left condition).
///
/// Returns one curve per state component.
pub fn solve_linear_tpbvp(system: &TpBvpSystem, mesh: &Mesh, eps: f64) -> Result<Vec<SampledCurve>> {
    let (a, b) = system.interval();
    if mesh.a() != a || mesh.b() != b {
        return Err(invalid("mesh does not cover the system's interval"));
    }
    if !(eps >= 0.0 && a + eps < b) {
        return Err(invalid(format!("eps must lie in [0, b - a), got {eps}")));
    }
    let m = system.dim();
    let start = a + eps;
    let grid = collocation_grid(mesh, start);
    let points = grid.len();
    let intervals = points - 1;

    let affine = |t: f64| -> Result<(Vec<f64>, Vec<f64>)> {
        let zero = vec![0.0; m];
        let g = system.eval(t, &zero);
        let mut f = vec![0.0; m * m]; // row-major F[r][c]
        let mut e = zero.clone();
        for c in 0..m {
            e[c] = 1.0;
            let col = system.eval(t, &e);
            for r in 0..m {
                f[r * m + c] = col[r] - g[r];
            }
            e[c] = 0.0;
        }
        if f.iter().chain(&g).any(|v| !v.is_finite()) {
            return Err(Error::Domain { t, reason: "right-hand side is not finite" });
        }
        Ok((f, g))
    };

    // affinity check at three states
    for &t in &[grid[0], 0.5 * (grid[0] + b), b] {
        let (f, g) = affine(t)?;
        for state in [vec![1.0; m], (0..m).map(|i| if i % 2 == 0 { 2.0 } else { -3.0 }).collect()] {
            let got = system.eval(t, &state);
            for r in 0..m {
                let lin: f64 = g[r] + (0..m).map(|c| f[r * m + c] * state[c]).sum::<f64>();
                if (got[r] - lin).abs() > 1e-8 * (1.0 + got[r].abs().max(lin.abs())) {
                    return Err(Error::NonAffine(t));
                }
            }
        }
    }

    let left = system.left_conditions();
    let right = system.right_conditions();
    let nl = left.len();
    let unknowns = points * m;
    let mut mat = BandMatrix::zeros(unknowns, nl + m - 1, 2 * m - 1);
    let mut rhs = vec![0.0; unknowns];

    let (f0, g0) = affine(start)?;
    for (row, &(c, v)) in left.iter().enumerate() {
        mat.add(row, c, 1.0);
        if eps > 0.0 {
            for k in 0..m {
                mat.add(row, k, -eps * f0[c * m + k]);
            }
            rhs[row] = v + eps * g0[c];
        } else {
            rhs[row] = v;
        }
    }
    for j in 0..intervals {
        let dt = grid[j + 1] - grid[j];
        let (f, g) = affine(0.5 * (grid[j] + grid[j + 1]))?;
        for r in 0..m {
            let row = nl + j * m + r;
            mat.add(row, (j + 1) * m + r, 1.0);
            mat.add(row, j * m + r, -1.0);
            for c in 0..m {
                let v = -0.5 * dt * f[r * m + c];
                if v != 0.0 {
                    mat.add(row, j * m + c, v);
                    mat.add(row, (j + 1) * m + c, v);
                }
            }
            rhs[row] = dt * g[r];
        }
    }
    for (k, &(c, v)) in right.iter().enumerate() {
        let row = nl + intervals * m + k;
        mat.add(row, intervals * m + c, 1.0);
        rhs[row] = v;
    }
    mat.solve(&mut rhs)?;

    let at = |j: usize, c: usize| rhs[j * m + c];
    let left_value = |c: usize| left.iter().find(|&&(i, _)| i == c).map(|&(_, v)| v);
    (0..m)
        .map(|c| {
            let mut values = Vec::with_capacity(mesh.n() + 1);
            let mut j = 0;
            for i in 0..=mesh.n() {
                let t = mesh.node(i);
                if t < start {
                    let v = match left_value(c) {
                        Some(v0) => v0 + (at(0, c) - v0) * (t - a) / eps,
                        None => {
                            let slope = (at(1, c) - at(0, c)) / (grid[1] - grid[0]);
                            at(0, c) + slope * (t - start)
                        }
                    };
                    values.push(v);
                    continue;
                }
                while j + 1 < points && (grid[j + 1] - t).abs() <= (grid[j] - t).abs() {
                    j += 1;
                }
                values.push(at(j, c));
            }
            SampledCurve::new(*mesh, values)
        })
        .collect()
}

/// Lagrangian `L(t, x, x', ..., x^(N))` with its partials in the derivative
/// arguments.
pub trait HigherOrderLagrangian {
    fn order(&self) -> usize;
    /// `dL / dx^(k)` at `derivs = [x, x', ..., x^(N)]`.
    fn partial(&self, k: usize, t: f64, derivs: &[f64]) -> f64;
}

/// Example 2 after the integer-order expansion:
/// `sum_{n=0..N} C(n, alpha) t^(n-alpha) x^(n) - x'^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example2IntegerLagrangian {
    pub alpha: f64,
    pub order: usize,
}

impl HigherOrderLagrangian for Example2IntegerLagrangian {
    fn order(&self) -> usize {
        self.order.max(1)
    }

    fn partial(&self, k: usize, t: f64, derivs: &[f64]) -> f64 {
        let mut v =
            if k <= self.order { integer_expansion_coeff(self.alpha, k) * t.powf(k as f64 - self.alpha) } else { 0.0 };
        if k == 1 {
            v -= 2.0 * derivs[1];
        }
        v
    }
}

/// Returns `t -> sum_k (-1)^k d^k/dt^k [dL/dx^(k)]` along `curve`, with the
/// outer derivatives by central differences of width `step`.
pub fn higher_order_el_residual<'a, L, D>(lagrangian: &'a L, curve: &'a D, step: f64) -> impl Fn(f64) -> f64 + 'a
where
    L: HigherOrderLagrangian + ?Sized,
    D: DerivativeBundle + ?Sized,
{
    move |t| {
        let order = lagrangian.order();
        let partial_at = |k: usize, s: f64| {
            let derivs: Vec<f64> = (0..=order).map(|j| curve.derivative(j, s)).collect();
            lagrangian.partial(k, s, &derivs)
        };
        (0..=order)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let dk: f64 = (0..=k)
                    .map(|j| {
                        let w = if j % 2 == 0 { 1.0 } else { -1.0 } * gen_binomial(k as f64, j);
                        w * partial_at(k, t + (0.5 * k as f64 - j as f64) * step)
                    })
                    .sum::<f64>()
                    / step.powi(k as i32);
                sign * dk
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansions::moments_vp;
    use crate::operators::{l2_error, max_error};
    use crate::quadrature::Quadrature;
    use approx::assert_relative_eq;

    #[test]
    fn analytic_example2_boundaries_and_curvature() {
        assert!(analytic_solution_example2(0.5, 0.0).abs() < 1e-15);
        assert!((analytic_solution_example2(0.5, 1.0) - 1.0).abs() < 1e-15);
        let h = 1e-4;
        for &t in &[0.2, 0.5, 0.8] {
            let fd = (analytic_solution_example2(0.5, t + h) - 2.0 * analytic_solution_example2(0.5, t)
                + analytic_solution_example2(0.5, t - h))
                / (h * h);
            let expected = -(1.0 - t).powf(-0.5) / (2.0 * gamma_unchecked(0.5));
            assert!((fd - expected).abs() < 1e-5, "t = {t}: {fd} vs {expected}");
        }
    }

    #[test]
    fn example4_exact_boundaries() {
        assert_eq!(exact_solution_example4(0.5, 0.0), 0.0);
        assert_relative_eq!(exact_solution_example4(0.5, 1.0), std::f64::consts::FRAC_2_SQRT_PI, max_relative = 1e-14);
        assert_relative_eq!(example4_right_value(0.5), std::f64::consts::FRAC_2_SQRT_PI, max_relative = 1e-10);
    }

    #[test]
    fn integer_closed_form_boundaries() {
        for n in 0..6 {
            let s = solve_example2_integer(0.5, n).unwrap();
            assert_eq!(s.eval(0.0), 0.0);
            assert!((s.eval(1.0) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn integer_closed_form_solves_its_reduced_problem() {
        for n in 1..=3 {
            let s = solve_example2_integer(0.5, n).unwrap();
            let lag = Example2IntegerLagrangian { alpha: 0.5, order: n };
            let r = higher_order_el_residual(&lag, &s, 1e-3);
            for t in [0.3, 0.5, 0.7] {
                assert!(r(t).abs() < 1e-4, "N = {n}, t = {t}: {}", r(t));
            }
        }
    }

    #[test]
    fn classical_lagrangian_residual() {
        struct Kinetic;
        impl HigherOrderLagrangian for Kinetic {
            fn order(&self) -> usize {
                1
            }
            fn partial(&self, k: usize, _t: f64, d: &[f64]) -> f64 {
                if k == 1 {
                    2.0 * d[1]
                } else {
                    0.0
                }
            }
        }
        let affine = crate::functions::FnBundle::new(usize::MAX, |k, t| match k {
            0 => 3.0 * t - 1.0,
            1 => 3.0,
            _ => 0.0,
        });
        let r = higher_order_el_residual(&Kinetic, &affine, 1e-3);
        assert!(r(0.4).abs() < 1e-10);
        let sq = crate::functions::TestFunction::Power(2.0);
        let r = higher_order_el_residual(&Kinetic, &sq, 1e-3);
        assert!((r(0.4) + 4.0).abs() < 1e-8);
    }

    #[test]
    fn moment_closed_form_boundaries_and_multipliers() {
        for n in [2, 3, 5, 8] {
            let s = solve_example2_moment_closed(0.5, n).unwrap();
            assert!(s.eval(0.0).abs() < 1e-15);
            assert!((s.eval(1.0) - 1.0).abs() < 1e-10);
            // lambda_1 implied by the x equation must satisfy its own ODE
            let c = s.coeffs().clone();
            let lam1 = |t: f64| c.b() * t.powf(0.5) - 2.0 * s.derivative(t);
            let h = 1e-5;
            for t in [0.2, 0.5, 0.9] {
                let lhs = (lam1(t + h) - lam1(t - h)) / (2.0 * h);
                let rhs = c.a() * t.powf(-0.5)
                    - (2..=n).map(|p| (1.0 - p as f64) * t.powi(p as i32 - 2) * s.lambda_p(p, t)).sum::<f64>();
                assert!((lhs - rhs).abs() < 1e-6 * (1.0 + rhs.abs()), "N = {n}, t = {t}: {lhs} vs {rhs}");
            }
        }
        assert!(solve_example2_moment_closed(0.5, 1).is_err());
    }

    #[test]
    fn tpbvp_validation() {
        let rhs: Rhs = Box::new(|_, y, out| out[0] = y[0]);
        assert!(TpBvpSystem::new(1, (0.0, 1.0), rhs, vec![(0, 1.0)], vec![(0, 1.0)]).is_err());
        let rhs: Rhs = Box::new(|_, y, out| out[0] = y[0]);
        assert!(TpBvpSystem::new(1, (0.0, 1.0), rhs, vec![(3, 1.0)], vec![]).is_err());
        let sys = assemble_tpbvp_example2(0.5, 3).unwrap();
        assert_eq!(sys.dim(), 6);
        let sys = assemble_tpbvp_example4(0.5, 4).unwrap();
        assert_eq!(sys.dim(), 8);
        assert_relative_eq!(sys.right_conditions()[0].1, std::f64::consts::FRAC_2_SQRT_PI, max_relative = 1e-14);
    }

    #[test]
    fn exponential_ivp_as_bvp() {
        let rhs: Rhs = Box::new(|_, y, out| out[0] = y[0]);
        let sys = TpBvpSystem::new(1, (0.0, 1.0), rhs, vec![(0, 1.0)], vec![]).unwrap();
        let mesh = Mesh::new(0.0, 1.0, 200).unwrap();
        let sol = solve_linear_tpbvp(&sys, &mesh, 0.0).unwrap();
        assert!((sol[0].values()[200] - std::f64::consts::E).abs() < 1e-4);
    }

    #[test]
    fn nonlinear_rhs_rejected() {
        let rhs: Rhs = Box::new(|_, y, out| out[0] = y[0] * y[0]);
        let sys = TpBvpSystem::new(1, (0.0, 1.0), rhs, vec![(0, 1.0)], vec![]).unwrap();
        let mesh = Mesh::new(0.0, 1.0, 10).unwrap();
        assert!(matches!(solve_linear_tpbvp(&sys, &mesh, 0.0), Err(Error::NonAffine(_))));
    }

    #[test]
    fn decoupled_multipliers_integrate_exactly() {
        let sys = assemble_tpbvp_example2(0.5, 3).unwrap();
        let closed = solve_example2_moment_closed(0.5, 3).unwrap();
        let worst = |n: usize, from: f64| {
            let mesh = Mesh::new(0.0, 1.0, n).unwrap();
            let sol = solve_linear_tpbvp(&sys, &mesh, 1e-4).unwrap();
            let mut e = 0.0f64;
            for p in 2..=3 {
                for (i, t) in mesh.nodes().enumerate().filter(|&(_, t)| t >= from) {
                    e = e.max((sol[3 + p - 1].values()[i] - closed.lambda_p(p, t)).abs());
                }
            }
            e
        };
        assert!(worst(1000, 0.5) < 1e-6);
        // second order on the uniform part of the grid
        let ratio = worst(200, 0.2) / worst(400, 0.2);
        assert!((3.5..4.5).contains(&ratio), "{ratio}");
    }

    #[test]
    fn tpbvp_matches_moment_closed_form() {
        let mesh = Mesh::new(0.0, 1.0, 400).unwrap();
        for n in [2, 3] {
            let sys = assemble_tpbvp_example2(0.5, n).unwrap();
            let sol = solve_linear_tpbvp(&sys, &mesh, 1e-4).unwrap();
            let closed = solve_example2_moment_closed(0.5, n).unwrap();
            let exact = mesh.sample(|t| closed.eval(t));
            let err = (0..=400).map(|i| (sol[0].values()[i] - exact.values()[i]).abs()).fold(0.0, f64::max);
            assert!(err < 1e-5, "N = {n}: {err}");
            assert!((sol[0].values()[400] - 1.0).abs() < 1e-12);
            // moments riding as states agree with quadrature moments of x
            for p in 2..=n {
                for i in [100, 250, 400] {
                    let t = mesh.node(i);
                    let q = moments_vp(|s| closed.eval(s), p, t, 0.0, Quadrature::Gauss(64)).unwrap();
                    assert!((sol[p - 1].values()[i] - q).abs() < 1e-5, "p = {p}, t = {t}");
                }
            }
        }
    }

    #[test]
    fn example4_moment_route_improves() {
        let mesh = Mesh::new(0.0, 1.0, 400).unwrap();
        let exact = mesh.sample(|t| exact_solution_example4(0.5, t));
        let err = |n| {
            let sys = assemble_tpbvp_example4(0.5, n).unwrap();
            let sol = solve_linear_tpbvp(&sys, &mesh, 1e-4).unwrap();
            l2_error(&sol[0], &exact).unwrap()
        };
        let (e2, e4) = (err(2), err(4));
        assert!(e2.is_finite() && e4 < e2, "{e2} {e4}");
    }

    #[test]
    fn integer_route_does_not_converge() {
        let mesh = Mesh::new(0.0, 1.0, 1000).unwrap();
        let exact = mesh.sample(|t| analytic_solution_example2(0.5, t));
        for n in 1..=6 {
            let s = solve_example2_integer(0.5, n).unwrap();
            let err = l2_error(&mesh.sample(|t| s.eval(t)), &exact).unwrap();
            assert!(err > 0.01, "N = {n}: {err}");
        }
        let s = solve_example2_moment_closed(0.5, 8).unwrap();
        assert!(max_error(&mesh.sample(|t| s.eval(t)), &exact).unwrap() < 0.05);
    }
}
