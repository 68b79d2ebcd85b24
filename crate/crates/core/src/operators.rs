//! Meshes, sampled curves, Grünwald-Letnikov family finite differences,
//! closed-form reference derivatives and error metrics.
//!
//! Curves are zero-extended outside `[a, b]`, so the truncated
//! Grünwald-Letnikov sums below are exact evaluations of the infinite ones
//! for the extended curve.

use crate::error::{invalid, Error, Result};
use crate::specfun::{gamma, gamma_unchecked, mittag_leffler};

/// Uniform grid `a = t_0 < t_1 < ... < t_n = b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh {
    a: f64,
    b: f64,
    n: usize,
    h: f64,
}

impl Mesh {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(invalid(format!("mesh needs a < b, got [{a}, {b}]")));
        }
        if n == 0 {
            return Err(invalid("mesh needs at least one subinterval"));
        }
        Ok(Mesh { a, b, n, h: (b - a) / n as f64 })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Node `t_i = a + i h`; the last node is `b` exactly.
    pub fn node(&self, i: usize) -> f64 {
        if i == self.n {
            self.b
        } else {
            self.a + i as f64 * self.h
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n).map(move |i| self.node(i))
    }

    /// Samples `f` at every node.
    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> SampledCurve {
        SampledCurve { mesh: *self, values: self.nodes().map(f).collect() }
    }
}

/// Function values on the nodes of a [`Mesh`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    mesh: Mesh,
    values: Vec<f64>,
}

impl SampledCurve {
    pub fn new(mesh: Mesh, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.n() + 1 {
            return Err(invalid(format!("curve has {} values, mesh needs {}", values.len(), mesh.n() + 1)));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(invalid(format!("curve value {v} is not finite")));
        }
        Ok(SampledCurve { mesh, values })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i > self.mesh.n() {
            Err(Error::IndexOutOfRange { index: i, n: self.mesh.n() })
        } else {
            Ok(())
        }
    }
}

fn check_alpha_unit(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

/// Grünwald-Letnikov weights `w_k = (-1)^k binom(alpha, k)`, `k = 0..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct GlWeights {
    alpha: f64,
    w: Vec<f64>,
}

impl GlWeights {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    /// `h^-alpha sum_{k=0..i} w_k x_{i-k}`.
    pub(crate) fn backward(&self, values: &[f64], i: usize, h: f64) -> f64 {
        let s: f64 = (0..=i).map(|k| self.w[k] * values[i - k]).sum();
        s * h.powf(-self.alpha)
    }

    /// `h^-alpha sum_{k=0..n-i} w_k x_{i+k}`.
    pub(crate) fn forward(&self, values: &[f64], i: usize, h: f64) -> f64 {
        let n = values.len() - 1;
        let s: f64 = (0..=n - i).map(|k| self.w[k] * values[i + k]).sum();
        s * h.powf(-self.alpha)
    }
}

/// Weights for `0 < alpha < 1` via `w_0 = 1`, `w_k = w_{k-1} (k - 1 - alpha) / k`.
pub fn gl_weights(alpha: f64, max_k: usize) -> Result<GlWeights> {
    check_alpha_unit(alpha)?;
    let mut w = Vec::with_capacity(max_k + 1);
    w.push(1.0);
    for k in 1..=max_k {
        let prev = w[k - 1];
        w.push(prev * (k as f64 - 1.0 - alpha) / k as f64);
    }
    Ok(GlWeights { alpha, w })
}

/// Left Grünwald-Letnikov approximation of the Riemann-Liouville derivative at node `i`.
pub fn gl_left(curve: &SampledCurve, alpha: f64, i: usize) -> Result<f64> {
    curve.check_index(i)?;
    let w = gl_weights(alpha, i)?;
    Ok(w.backward(&curve.values, i, curve.mesh.h()))
}

/// Right Grünwald-Letnikov approximation at node `i`.
pub fn gl_right(curve: &SampledCurve, alpha: f64, i: usize) -> Result<f64> {
    curve.check_index(i)?;
    let n = curve.mesh.n();
    let w = gl_weights(alpha, n - i)?;
    Ok(w.forward(&curve.values, i, curve.mesh.h()))
}

/// Shifted Grünwald-Letnikov derivative `h^-alpha sum_{k=0..i} w_k x(t_i - (k-1) h)`.
pub fn gl_shifted_left(curve: &SampledCurve, alpha: f64, i: usize) -> Result<f64> {
    let n = curve.mesh.n();
    if i + 1 > n {
        return Err(Error::IndexOutOfRange { index: i + 1, n });
    }
    let w = gl_weights(alpha, i)?;
    let s: f64 = (0..=i).map(|k| w.w[k] * curve.values[i + 1 - k]).sum();
    Ok(s * curve.mesh.h().powf(-alpha))
}

/// Diethelm weight `a_{i,j}`. For `alpha > 1`, `0^(1-alpha)` is taken as 0
/// (finite-part convention).
pub fn diethelm_weight(alpha: f64, i: usize, j: usize) -> f64 {
    let p = 1.0 - alpha;
    let pow = |m: usize| if m == 0 { 0.0 } else { (m as f64).powf(p) };
    if j == 0 {
        1.0
    } else if j < i {
        pow(j + 1) - 2.0 * pow(j) + pow(j - 1)
    } else {
        p * (i as f64).powf(-alpha) - pow(i) + pow(i - 1)
    }
}

/// Diethelm backward difference for the left Caputo derivative,
/// `0 < alpha < 2`, `alpha != 1`. `boundary_derivs[k] = x^(k)(a)` for
/// `k = 0..=floor(alpha)`.
pub fn diethelm_caputo(curve: &SampledCurve, alpha: f64, boundary_derivs: &[f64], i: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) || alpha == 1.0 {
        return Err(invalid(format!("Diethelm formula needs alpha in (0,2) \\ {{1}}, got {alpha}")));
    }
    let order = alpha.floor() as usize;
    if boundary_derivs.len() != order + 1 {
        return Err(invalid(format!("expected {} boundary derivatives, got {}", order + 1, boundary_derivs.len())));
    }
    curve.check_index(i)?;
    let h = curve.mesh.h();
    let mut sum = 0.0;
    for j in 0..=i {
        let m = (i - j) as f64;
        let mut taylor = 0.0;
        let mut coeff = 1.0; // (m h)^k / k!
        for (k, d) in boundary_derivs.iter().enumerate() {
            if k > 0 {
                coeff *= m * h / k as f64;
            }
            taylor += coeff * d;
        }
        sum += diethelm_weight(alpha, i, j) * (curve.values[i - j] - taylor);
    }
    Ok(h.powf(-alpha) / gamma_unchecked(2.0 - alpha) * sum)
}

/// Exact left Riemann-Liouville derivative of `(t - a)^nu`:
/// `Γ(nu+1) / Γ(nu+1-alpha) (t-a)^(nu-alpha)`.
pub fn rl_power_exact(nu: f64, alpha: f64, t: f64, a: f64) -> Result<f64> {
    if !(nu > -1.0) {
        return Err(invalid(format!("power rule needs nu > -1, got {nu}")));
    }
    if !(t > a) {
        return Err(Error::Domain { t, reason: "power rule needs t > a" });
    }
    Ok(gamma(nu + 1.0)? / gamma(nu + 1.0 - alpha)? * (t - a).powf(nu - alpha))
}

/// Exact left Riemann-Liouville derivative (terminal 0) of `e^(lambda t)`:
/// `t^-alpha E_{1,1-alpha}(lambda t)`.
pub fn rl_exp_exact(lambda: f64, alpha: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain { t, reason: "exponential rule needs t > 0" });
    }
    Ok(t.powf(-alpha) * mittag_leffler(1.0, 1.0 - alpha, lambda * t)?)
}

/// Exact left Hadamard derivative (terminal 1) of `(ln t)^beta`:
/// `Γ(beta+1) / Γ(beta+1-alpha) (ln t)^(beta-alpha)`.
pub fn hadamard_logpow_exact(beta: f64, alpha: f64, t: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(invalid(format!("log-power rule needs beta > 0, got {beta}")));
    }
    if !(t > 1.0) {
        return Err(Error::Domain { t, reason: "log-power rule needs t > 1" });
    }
    Ok(gamma(beta + 1.0)? / gamma(beta + 1.0 - alpha)? * t.ln().powf(beta - alpha))
}

/// Exact left Hadamard derivative with terminal `a > 0` of `t^mu`.
///
/// With `s = ln(t/a)` the Hadamard derivative of `x` is the Riemann-Liouville
/// derivative of `s -> x(a e^s)`, here `a^mu e^(mu s)`, which gives
/// `a^mu s^-alpha E_{1,1-alpha}(mu s)`.
pub fn hadamard_power_exact(mu: f64, alpha: f64, t: f64, a: f64) -> Result<f64> {
    if !(a > 0.0 && t > a) {
        return Err(Error::Domain { t, reason: "Hadamard power rule needs 0 < a < t" });
    }
    let s = (t / a).ln();
    Ok(a.powf(mu) * s.powf(-alpha) * mittag_leffler(1.0, 1.0 - alpha, mu * s)?)
}

fn check_same_mesh(x: &SampledCurve, y: &SampledCurve) -> Result<()> {
    if x.mesh != y.mesh {
        Err(Error::MeshMismatch)
    } else {
        Ok(())
    }
}

/// L² distance by the composite trapezoid rule on the mesh.
pub fn l2_error(x: &SampledCurve, y: &SampledCurve) -> Result<f64> {
    check_same_mesh(x, y)?;
    let sq: Vec<f64> = x.values.iter().zip(&y.values).map(|(p, q)| (p - q).powi(2)).collect();
    let n = sq.len() - 1;
    let interior: f64 = sq[1..n].iter().sum();
    Ok((x.mesh.h() * (0.5 * (sq[0] + sq[n]) + interior)).sqrt())
}

/// Maximum deviation over the interior nodes `1..n-1`.
pub fn max_error(x: &SampledCurve, y: &SampledCurve) -> Result<f64> {
    check_same_mesh(x, y)?;
    let n = x.mesh.n();
    Ok((1..n).map(|i| (x.values[i] - y.values[i]).abs()).fold(0.0, f64::max))
}
