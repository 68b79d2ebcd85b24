//! Expansions of fractional derivatives in terms of integer-order derivatives
//! and in terms of moments `V_p`, with their truncation-error bounds.
//!
//! All expansions are singular at the initial point of the derivative (`a`
//! for left operators, `b` for right ones) and return [`Error::Domain`] there.

use crate::error::{invalid, Error, Result};
use crate::functions::DerivativeBundle;
use crate::quadrature::Quadrature;
use crate::specfun::{gamma_unchecked, ln_gamma, stirling_function};

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

/// `Γ(p - 1 + alpha) / (Γ(alpha) (p - 1)!)`, the `p`-th term of the `A(alpha, N)` sum.
pub fn a_term(alpha: f64, p: usize) -> f64 {
    debug_assert!(p >= 2);
    (2..p).fold(alpha, |acc, q| acc * (q as f64 - 1.0 + alpha) / q as f64)
}

/// `Γ(p - 1 + alpha) / (Γ(alpha - 1) p!)`, the `p`-th term of the `B(alpha, N)` sum,
/// equal to `(-1)^p binom(1 - alpha, p)`.
pub fn b_term(alpha: f64, p: usize) -> f64 {
    debug_assert!(p >= 1);
    (1..p).fold(alpha - 1.0, |acc, q| acc * (q as f64 - 1.0 + alpha) / (q + 1) as f64)
}

/// Coefficients `A(alpha, N)`, `B(alpha, N)` and `C(alpha, p)` of the
/// Riemann-Liouville moment expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentCoeffs {
    alpha: f64,
    order: usize,
    a: f64,
    b: f64,
    c: Vec<f64>,
}

impl MomentCoeffs {
    /// `order` is the truncation order `N >= 1`; `N = 1` leaves the `C` table empty.
    pub fn new(alpha: f64, order: usize) -> Result<Self> {
        check_alpha(alpha)?;
        if order == 0 {
            return Err(invalid("moment expansion order must be at least 1"));
        }
        let a_sum: f64 = (2..=order).map(|p| a_term(alpha, p)).sum();
        let b_terms: Vec<f64> = (1..=order).map(|p| b_term(alpha, p)).collect();
        let g2 = gamma_unchecked(2.0 - alpha);
        let a = (1.0 + a_sum) / gamma_unchecked(1.0 - alpha);
        let b = (1.0 + b_terms.iter().sum::<f64>()) / g2;
        let c = (2..=order).map(|p| p as f64 * b_terms[p - 1] / g2).collect();
        Ok(MomentCoeffs { alpha, order, a, b, c })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `C(alpha, p)` for `2 <= p <= N`.
    pub fn c(&self, p: usize) -> f64 {
        self.c[p - 2]
    }

    /// `(p, C(alpha, p))` for `p = 2..=N`.
    pub fn c_iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.c.iter().enumerate().map(|(i, &c)| (i + 2, c))
    }
}

/// Coefficients of the Hadamard moment expansion. `A` and `B` are given by
/// the same sums as [`MomentCoeffs`]; `C(alpha, p)` is evaluated from its own
/// gamma-function form `Γ(p+alpha-1) / (Γ(-alpha) Γ(1+alpha) (p-1)!)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HadamardMomentCoeffs {
    alpha: f64,
    order: usize,
    a: f64,
    b: f64,
    c: Vec<f64>,
}

impl HadamardMomentCoeffs {
    pub fn new(alpha: f64, order: usize) -> Result<Self> {
        check_alpha(alpha)?;
        if order == 0 {
            return Err(invalid("moment expansion order must be at least 1"));
        }
        let a_sum: f64 =
            (2..=order).map(|p| gamma_ratio(p as f64 + alpha - 1.0, p as f64) / gamma_unchecked(alpha)).sum();
        let b_sum: f64 = (1..=order)
            .map(|p| gamma_ratio(p as f64 + alpha - 1.0, p as f64 + 1.0) / gamma_unchecked(alpha - 1.0))
            .sum();
        let a = (1.0 + a_sum) / gamma_unchecked(1.0 - alpha);
        let b = (1.0 + b_sum) / gamma_unchecked(2.0 - alpha);
        let norm = gamma_unchecked(-alpha) * gamma_unchecked(1.0 + alpha);
        let c = (2..=order).map(|p| gamma_ratio(p as f64 + alpha - 1.0, p as f64) / norm).collect();
        Ok(HadamardMomentCoeffs { alpha, order, a, b, c })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self, p: usize) -> f64 {
        self.c[p - 2]
    }

    pub fn c_iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.c.iter().enumerate().map(|(i, &c)| (i + 2, c))
    }
}

/// `Γ(x) / Γ(y)` for positive arguments, through logarithms once either
/// would overflow.
fn gamma_ratio(x: f64, y: f64) -> f64 {
    if x < 170.0 && y < 170.0 {
        gamma_unchecked(x) / gamma_unchecked(y)
    } else {
        (ln_gamma(x) - ln_gamma(y)).exp()
    }
}

/// `B(alpha, N)` over a grid; `table[i][j] = B(alphas[i], orders[j])`.
pub fn b_table(alphas: &[f64], orders: &[usize]) -> Result<Vec<Vec<f64>>> {
    alphas.iter().map(|&alpha| orders.iter().map(|&n| MomentCoeffs::new(alpha, n).map(|c| c.b())).collect()).collect()
}

fn check_order<D: DerivativeBundle + ?Sized>(bundle: &D, order: usize) -> Result<()> {
    if bundle.max_order() < order {
        Err(invalid(format!(
            "expansion of order {order} needs derivatives the bundle does not provide (max {})",
            bundle.max_order()
        )))
    } else {
        Ok(())
    }
}

/// Coefficient `(-1)^(k-1) alpha / (k! (k - alpha) Γ(1 - alpha))` of the
/// integer-order expansion.
pub fn integer_expansion_coeff(alpha: f64, k: usize) -> f64 {
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    sign * alpha / (fact * (k as f64 - alpha) * gamma_unchecked(1.0 - alpha))
}

/// Left Riemann-Liouville derivative truncated after the `order`-th
/// derivative of `x`.
pub fn expand_integer_left<D: DerivativeBundle + ?Sized>(
    bundle: &D,
    alpha: f64,
    order: usize,
    t: f64,
    a: f64,
) -> Result<f64> {
    check_alpha(alpha)?;
    check_order(bundle, order)?;
    if !(t > a) {
        return Err(Error::Domain { t, reason: "left expansion is singular at t = a" });
    }
    let dt = t - a;
    Ok((0..=order)
        .map(|k| integer_expansion_coeff(alpha, k) * bundle.derivative(k, t) * dt.powf(k as f64 - alpha))
        .sum())
}

/// Right Riemann-Liouville derivative by the integer-order expansion.
pub fn expand_integer_right<D: DerivativeBundle + ?Sized>(
    bundle: &D,
    alpha: f64,
    order: usize,
    t: f64,
    b: f64,
) -> Result<f64> {
    check_alpha(alpha)?;
    check_order(bundle, order)?;
    if !(t < b) {
        return Err(Error::Domain { t, reason: "right expansion is singular at t = b" });
    }
    let dt = b - t;
    let g = gamma_unchecked(1.0 - alpha);
    let mut fact = 1.0;
    let mut sum = 0.0;
    for k in 0..=order {
        if k > 0 {
            fact *= k as f64;
        }
        sum += -alpha * bundle.derivative(k, t) / (fact * (k as f64 - alpha) * g) * dt.powf(k as f64 - alpha);
    }
    Ok(sum)
}

/// Moment `V_p(t) = (1 - p) int_a^t (tau - a)^(p-2) x(tau) dtau`.
pub fn moments_vp<F: Fn(f64) -> f64>(x: F, p: usize, t: f64, a: f64, quad: Quadrature) -> Result<f64> {
    if p < 2 {
        return Err(invalid(format!("moments are defined for p >= 2, got {p}")));
    }
    if t < a {
        return Err(Error::Domain { t, reason: "moment V_p needs t >= a" });
    }
    let e = (p - 2) as i32;
    Ok((1.0 - p as f64) * quad.integrate(|tau| (tau - a).powi(e) * x(tau), a, t))
}

/// Right moment `W_p(t) = (1 - p) int_t^b (b - tau)^(p-2) x(tau) dtau`.
pub fn moments_wp<F: Fn(f64) -> f64>(x: F, p: usize, t: f64, b: f64, quad: Quadrature) -> Result<f64> {
    if p < 2 {
        return Err(invalid(format!("moments are defined for p >= 2, got {p}")));
    }
    if t > b {
        return Err(Error::Domain { t, reason: "moment W_p needs t <= b" });
    }
    let e = (p - 2) as i32;
    Ok((1.0 - p as f64) * quad.integrate(|tau| (b - tau).powi(e) * x(tau), t, b))
}

/// Left Riemann-Liouville derivative by the moment expansion:
/// `A (t-a)^-alpha x + B (t-a)^(1-alpha) x' - sum_p C_p (t-a)^(1-p-alpha) V_p`.
pub fn expand_moment_left<F, G>(x: F, xdot: G, coeffs: &MomentCoeffs, t: f64, a: f64, quad: Quadrature) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if !(t > a) {
        return Err(Error::Domain { t, reason: "left expansion is singular at t = a" });
    }
    let alpha = coeffs.alpha();
    let dt = t - a;
    let mut sum = coeffs.a() * dt.powf(-alpha) * x(t) + coeffs.b() * dt.powf(1.0 - alpha) * xdot(t);
    for (p, c) in coeffs.c_iter() {
        sum -= c * dt.powf(1.0 - p as f64 - alpha) * moments_vp(&x, p, t, a, quad)?;
    }
    Ok(sum)
}

/// Right Riemann-Liouville derivative by the moment expansion.
pub fn expand_moment_right<F, G>(x: F, xdot: G, coeffs: &MomentCoeffs, t: f64, b: f64, quad: Quadrature) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if !(t < b) {
        return Err(Error::Domain { t, reason: "right expansion is singular at t = b" });
    }
    let alpha = coeffs.alpha();
    let dt = b - t;
    let mut sum = coeffs.a() * dt.powf(-alpha) * x(t) - coeffs.b() * dt.powf(1.0 - alpha) * xdot(t);
    for (p, c) in coeffs.c_iter() {
        sum -= c * dt.powf(1.0 - p as f64 - alpha) * moments_wp(&x, p, t, b, quad)?;
    }
    Ok(sum)
}

/// Left Caputo derivative: the moment expansion minus
/// `x(a) (t-a)^-alpha / Γ(1-alpha)`, the Riemann-Liouville derivative of the
/// constant `x(a)`.
pub fn expand_caputo_left<F, G>(x: F, xdot: G, coeffs: &MomentCoeffs, t: f64, a: f64, quad: Quadrature) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let rl = expand_moment_left(&x, xdot, coeffs, t, a, quad)?;
    let alpha = coeffs.alpha();
    Ok(rl - x(a) * (t - a).powf(-alpha) / gamma_unchecked(1.0 - alpha))
}

/// Right Caputo derivative: the right moment expansion minus
/// `x(b) (b-t)^-alpha / Γ(1-alpha)`.
pub fn expand_caputo_right<F, G>(x: F, xdot: G, coeffs: &MomentCoeffs, t: f64, b: f64, quad: Quadrature) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let rl = expand_moment_right(&x, xdot, coeffs, t, b, quad)?;
    let alpha = coeffs.alpha();
    Ok(rl - x(b) * (b - t).powf(-alpha) / gamma_unchecked(1.0 - alpha))
}

/// Moment expansion with the `B` term dropped, as if `B(alpha, N)` were 0.
///
/// Kept for comparison only: at finite `N` the `B` coefficient is far from
/// zero (see [`b_table`]) and this variant is markedly less accurate.
pub fn expand_atanackovic<F: Fn(f64) -> f64>(
    x: F,
    coeffs: &MomentCoeffs,
    t: f64,
    a: f64,
    quad: Quadrature,
) -> Result<f64> {
    if !(t > a) {
        return Err(Error::Domain { t, reason: "left expansion is singular at t = a" });
    }
    let alpha = coeffs.alpha();
    let dt = t - a;
    let mut sum = coeffs.a() * dt.powf(-alpha) * x(t);
    for (p, c) in coeffs.c_iter() {
        sum -= c * dt.powf(1.0 - p as f64 - alpha) * moments_vp(&x, p, t, a, quad)?;
    }
    Ok(sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HadamardDirection {
    Derivative,
    Integral,
}

/// Hadamard derivative or integral (terminal 0) by the Stirling-function
/// series `sum_{k=0..N} S(+-alpha, k) t^k x^(k)(t)`.
pub fn hadamard_expand_integer<D: DerivativeBundle + ?Sized>(
    bundle: &D,
    alpha: f64,
    order: usize,
    t: f64,
    direction: HadamardDirection,
) -> Result<f64> {
    check_order(bundle, order)?;
    if !(t > 0.0) {
        return Err(Error::Domain { t, reason: "Hadamard expansion needs t > 0" });
    }
    let s = match direction {
        HadamardDirection::Derivative => alpha,
        HadamardDirection::Integral => -alpha,
    };
    Ok((0..=order).map(|k| stirling_function(s, k) * t.powi(k as i32) * bundle.derivative(k, t)).sum())
}

/// Log-moment `V_p(t) = (1-p) int_a^t (ln(tau/a))^(p-2) x(tau) / tau dtau`.
pub fn hadamard_moment_vp<F: Fn(f64) -> f64>(x: F, p: usize, t: f64, a: f64, quad: Quadrature) -> Result<f64> {
    if p < 2 {
        return Err(invalid(format!("moments are defined for p >= 2, got {p}")));
    }
    if !(a > 0.0) || t < a {
        return Err(Error::Domain { t, reason: "Hadamard moment needs 0 < a <= t" });
    }
    let e = (p - 2) as i32;
    Ok((1.0 - p as f64) * quad.integrate(|tau| (tau / a).ln().powi(e) * x(tau) / tau, a, t))
}

/// Right log-moment `W_p(t) = (1-p) int_t^b (ln(b/tau))^(p-2) x(tau) / tau dtau`.
pub fn hadamard_moment_wp<F: Fn(f64) -> f64>(x: F, p: usize, t: f64, b: f64, quad: Quadrature) -> Result<f64> {
    if p < 2 {
        return Err(invalid(format!("moments are defined for p >= 2, got {p}")));
    }
    if !(t > 0.0) || t > b {
        return Err(Error::Domain { t, reason: "Hadamard moment needs 0 < t <= b" });
    }
    let e = (p - 2) as i32;
    Ok((1.0 - p as f64) * quad.integrate(|tau| (b / tau).ln().powi(e) * x(tau) / tau, t, b))
}

/// Left Hadamard derivative by the moment expansion:
/// `A L^-alpha x + B L^(1-alpha) t x' - sum_p C_p L^(1-alpha-p) V_p`, `L = ln(t/a)`.
///
/// The moment sum enters with a minus sign, as in the untruncated series and
/// in the right-sided formula.
pub fn hadamard_expand_moment<F, G>(
    x: F,
    xdot: G,
    coeffs: &HadamardMomentCoeffs,
    t: f64,
    a: f64,
    quad: Quadrature,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if !(a > 0.0) {
        return Err(invalid(format!("Hadamard terminal must be positive, got {a}")));
    }
    if !(t > a) {
        return Err(Error::Domain { t, reason: "left Hadamard expansion is singular at t = a" });
    }
    let alpha = coeffs.alpha();
    let l = (t / a).ln();
    let mut sum = coeffs.a() * l.powf(-alpha) * x(t) + coeffs.b() * l.powf(1.0 - alpha) * t * xdot(t);
    for (p, c) in coeffs.c_iter() {
        sum -= c * l.powf(1.0 - alpha - p as f64) * hadamard_moment_vp(&x, p, t, a, quad)?;
    }
    Ok(sum)
}

/// Right Hadamard derivative by the moment expansion, `L = ln(b/t)`.
pub fn hadamard_expand_moment_right<F, G>(
    x: F,
    xdot: G,
    coeffs: &HadamardMomentCoeffs,
    t: f64,
    b: f64,
    quad: Quadrature,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if !(t > 0.0) {
        return Err(Error::Domain { t, reason: "Hadamard expansion needs t > 0" });
    }
    if !(t < b) {
        return Err(Error::Domain { t, reason: "right Hadamard expansion is singular at t = b" });
    }
    let alpha = coeffs.alpha();
    let l = (b / t).ln();
    let mut sum = coeffs.a() * l.powf(-alpha) * x(t) - coeffs.b() * l.powf(1.0 - alpha) * t * xdot(t);
    for (p, c) in coeffs.c_iter() {
        sum -= c * l.powf(1.0 - alpha - p as f64) * hadamard_moment_wp(&x, p, t, b, quad)?;
    }
    Ok(sum)
}

/// Truncation bound of the integer-order expansion,
/// `M (t-a)^(N+1-alpha) / (Γ(1-alpha) (N+1)!)` with `M = max |x^(N+1)|` on `[a, t]`.
pub fn bound_integer(max_deriv: f64, alpha: f64, order: usize, t: f64, a: f64) -> f64 {
    let fact: f64 = (1..=order + 1).map(|i| i as f64).product();
    max_deriv * (t - a).powf(order as f64 + 1.0 - alpha) / (gamma_unchecked(1.0 - alpha) * fact)
}

/// `e^((1-alpha)^2 + 1 - alpha) / (Γ(2-alpha) (1-alpha) N^(1-alpha))`, shared by
/// the moment bounds.
fn moment_bound_factor(alpha: f64, order: usize) -> f64 {
    let beta = 1.0 - alpha;
    (beta * beta + beta).exp() / (gamma_unchecked(2.0 - alpha) * beta * (order as f64).powf(beta))
}

/// Truncation bound of the moment expansion with `L2 = max |x''|` on `[a, t]`.
pub fn bound_moment(max_second: f64, alpha: f64, order: usize, t: f64, a: f64) -> f64 {
    max_second * moment_bound_factor(alpha, order) * (t - a).powf(2.0 - alpha)
}

/// Truncation bound of the Hadamard moment expansion with
/// `L = max |x'(tau) + tau x''(tau)|` on `[a, t]`.
pub fn bound_hadamard(max_l: f64, alpha: f64, order: usize, t: f64, a: f64) -> f64 {
    max_l * moment_bound_factor(alpha, order) * (t / a).ln().powf(1.0 - alpha) * (t - a)
}
