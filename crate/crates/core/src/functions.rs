//! Analytic test functions with closed-form derivatives of every order.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::operators::{hadamard_logpow_exact, hadamard_power_exact, rl_exp_exact, rl_power_exact};

/// Supplies `x^(k)(t)` for `k = 0..=max_order()`.
pub trait DerivativeBundle {
    fn max_order(&self) -> usize;
    fn derivative(&self, k: usize, t: f64) -> f64;

    fn value(&self, t: f64) -> f64 {
        self.derivative(0, t)
    }
}

/// Wraps a closure `(k, t) -> x^(k)(t)` as a [`DerivativeBundle`].
pub struct FnBundle<F> {
    max_order: usize,
    f: F,
}

impl<F: Fn(usize, f64) -> f64> FnBundle<F> {
    pub fn new(max_order: usize, f: F) -> Self {
        FnBundle { max_order, f }
    }
}

impl<F: Fn(usize, f64) -> f64> DerivativeBundle for FnBundle<F> {
    fn max_order(&self) -> usize {
        self.max_order
    }

    fn derivative(&self, k: usize, t: f64) -> f64 {
        (self.f)(k, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestFunction {
    /// `t^nu`
    Power(f64),
    /// `e^(lambda t)`
    Exp(f64),
    /// `ln t`
    Log,
    /// `(b - t)^nu`
    ReflectedPower { nu: f64, b: f64 },
}

fn falling(nu: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (nu - j as f64))
}

impl TestFunction {
    /// Exact left Riemann-Liouville derivative with terminal 0, where known.
    pub fn rl_left_exact(&self, alpha: f64, t: f64) -> Result<f64> {
        match *self {
            TestFunction::Power(nu) => rl_power_exact(nu, alpha, t, 0.0),
            TestFunction::Exp(lambda) => rl_exp_exact(lambda, alpha, t),
            _ => Err(invalid(format!("no closed-form left RL derivative for {self}"))),
        }
    }

    /// Exact left Hadamard derivative with terminal `a`, where known.
    pub fn hadamard_left_exact(&self, alpha: f64, t: f64, a: f64) -> Result<f64> {
        match *self {
            TestFunction::Power(mu) => hadamard_power_exact(mu, alpha, t, a),
            TestFunction::Log if a == 1.0 => hadamard_logpow_exact(1.0, alpha, t),
            _ => Err(invalid(format!("no closed-form left Hadamard derivative for {self} from {a}"))),
        }
    }
}

impl DerivativeBundle for TestFunction {
    fn max_order(&self) -> usize {
        usize::MAX
    }

    fn derivative(&self, k: usize, t: f64) -> f64 {
        match *self {
            TestFunction::Power(nu) => {
                let c = falling(nu, k);
                if c == 0.0 {
                    0.0
                } else {
                    c * t.powf(nu - k as f64)
                }
            }
            TestFunction::Exp(lambda) => lambda.powi(k as i32) * (lambda * t).exp(),
            TestFunction::Log => {
                if k == 0 {
                    t.ln()
                } else {
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    let fact: f64 = (1..k).map(|i| i as f64).product();
                    sign * fact * t.powi(-(k as i32))
                }
            }
            TestFunction::ReflectedPower { nu, b } => {
                let c = falling(nu, k);
                if c == 0.0 {
                    0.0
                } else {
                    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
                    sign * c * (b - t).powf(nu - k as f64)
                }
            }
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TestFunction::Power(nu) if nu.fract() == 0.0 => write!(f, "t{}", nu as i64),
            TestFunction::Power(nu) => write!(f, "t^{nu}"),
            TestFunction::Exp(l) if l.fract() == 0.0 => write!(f, "exp{}t", l as i64),
            TestFunction::Exp(l) => write!(f, "exp({l}t)"),
            TestFunction::Log => write!(f, "lnt"),
            TestFunction::ReflectedPower { nu, b } => write!(f, "({b}-t)^{nu}"),
        }
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    /// Accepts `t<k>` (e.g. `t4`), `exp<k>t` (e.g. `exp2t`) and `lnt`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || invalid(format!("unknown function id '{s}' (expected t<k>, exp<k>t or lnt)"));
        if s == "lnt" {
            return Ok(TestFunction::Log);
        }
        if let Some(rest) = s.strip_prefix("exp").and_then(|r| r.strip_suffix('t')) {
            let lambda = if rest.is_empty() { 1.0 } else { rest.parse().map_err(|_| bad())? };
            return Ok(TestFunction::Exp(lambda));
        }
        if let Some(rest) = s.strip_prefix('t') {
            return rest.parse().map(TestFunction::Power).map_err(|_| bad());
        }
        Err(bad())
    }
}

/// Largest `|f|` over `[lo, hi]`, by the endpoints and `samples` equispaced
/// interior points. Exact when `|f|` is monotone on the interval.
pub fn max_abs_on<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, samples: usize) -> f64 {
    let n = samples.max(1);
    (0..=n)
        .map(|i| {
            let t = if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 };
            f(t).abs()
        })
        .fold(0.0, f64::max)
}
