//! Property checks shared by the proptest suite and the acceptance runner.
//! Each check returns `Err` with a description of the first violation.

#![allow(dead_code)]

use fracvar_core::direct::{discretize, DirectProblem};
use fracvar_core::expansions::{
    a_term, b_term, expand_atanackovic, expand_caputo_left, expand_integer_left, expand_integer_right,
    expand_moment_left, expand_moment_right, hadamard_expand_integer, hadamard_expand_moment, HadamardDirection,
    HadamardMomentCoeffs, MomentCoeffs,
};
use fracvar_core::functions::{DerivativeBundle, FnBundle, TestFunction};
use fracvar_core::operators::{gl_left, gl_right, l2_error, max_error, Mesh};
use fracvar_core::quadrature::Quadrature;
use fracvar_core::specfun::{gamma, gen_binomial, mittag_leffler, stirling_function};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRng, TestRunner};

pub type Check = std::result::Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn gamma_recurrence(z: f64) -> Check {
    let g1 = gamma(z + 1.0).map_err(|e| e.to_string())?;
    let g = gamma(z).map_err(|e| e.to_string())?;
    ensure((g1 - z * g).abs() <= 1e-12 * g1.abs(), || format!("z = {z}: Γ(z+1) = {g1}, zΓ(z) = {}", z * g))
}

pub fn pascal(alpha: f64, k: usize) -> Check {
    let lhs = gen_binomial(alpha, k);
    let rhs = gen_binomial(alpha - 1.0, k) + gen_binomial(alpha - 1.0, k - 1);
    ensure((lhs - rhs).abs() <= 1e-12, || format!("alpha = {alpha}, k = {k}: {lhs} vs {rhs}"))
}

pub fn mittag_leffler_exp(z: f64) -> Check {
    let ml = mittag_leffler(1.0, 1.0, z).map_err(|e| e.to_string())?;
    let e = z.exp();
    ensure((ml - e).abs() <= 1e-12 * e, || format!("z = {z}: {ml} vs {e}"))
}

/// Stirling numbers of the second kind by `S(n, k) = k S(n-1, k) + S(n-1, k-1)`.
pub fn stirling_second_kind(n: usize, k: usize) -> f64 {
    let mut row = vec![1.0];
    for m in 1..=n {
        let mut next = vec![0.0; m + 1];
        for j in 1..=m {
            let stay = if j < row.len() { j as f64 * row[j] } else { 0.0 };
            next[j] = stay + row[j - 1];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0.0)
}

pub fn stirling_integer(m: usize, k: usize) -> Check {
    let s = stirling_function(m as f64, k);
    let oracle = stirling_second_kind(m, k);
    ensure((s - oracle).abs() <= 1e-9 * oracle.max(1.0), || format!("S({m}, {k}) = {s}, expected {oracle}"))
}

/// `c1 f + c2 g` with `f = t^2 + 1` and `g = e^(0.7 t)`, bundled with its derivatives.
fn combo(c1: f64, c2: f64) -> impl DerivativeBundle {
    let f = TestFunction::Power(2.0);
    let g = TestFunction::Exp(0.7);
    FnBundle::new(usize::MAX, move |k, t| {
        let shift = if k == 0 { 1.0 } else { 0.0 };
        c1 * (f.derivative(k, t) + shift) + c2 * g.derivative(k, t)
    })
}

fn linear_close(name: &str, mixed: f64, parts: (f64, f64), c: (f64, f64)) -> Check {
    let combined = c.0 * parts.0 + c.1 * parts.1;
    let scale = 1.0 + (c.0 * parts.0).abs() + (c.1 * parts.1).abs();
    ensure((mixed - combined).abs() <= 1e-10 * scale, || {
        format!("{name}: T(c1 f + c2 g) = {mixed}, c1 T f + c2 T g = {combined}")
    })
}

/// Every expansion applied to `c1 f + c2 g` against the same combination of
/// the separate results, at `t` in `(0, 1)` (left/right RL) and `1 + t`
/// (Hadamard, terminal 1, right end 2).
pub fn expansion_linearity(alpha: f64, order: usize, t: f64, c1: f64, c2: f64) -> Check {
    let q = Quadrature::Gauss(16);
    let e = |r: fracvar_core::Result<f64>| r.map_err(|e| e.to_string());
    let c = (c1, c2);
    let (f, g, h) = (combo(1.0, 0.0), combo(0.0, 1.0), combo(c1, c2));
    let bundles = [&f, &g, &h];
    let mc = MomentCoeffs::new(alpha, order).map_err(|e| e.to_string())?;
    let hc = HadamardMomentCoeffs::new(alpha, order).map_err(|e| e.to_string())?;

    type Op<'a> = Box<dyn Fn(&dyn DerivativeBundle) -> fracvar_core::Result<f64> + 'a>;
    let ops: Vec<(&str, Op)> = vec![
        ("integer left", Box::new(|x| expand_integer_left(x, alpha, order, t, 0.0))),
        ("integer right", Box::new(|x| expand_integer_right(x, alpha, order, t, 1.0))),
        ("moment left", Box::new(|x| expand_moment_left(|s| x.value(s), |s| x.derivative(1, s), &mc, t, 0.0, q))),
        ("moment right", Box::new(|x| expand_moment_right(|s| x.value(s), |s| x.derivative(1, s), &mc, t, 1.0, q))),
        ("caputo left", Box::new(|x| expand_caputo_left(|s| x.value(s), |s| x.derivative(1, s), &mc, t, 0.0, q))),
        ("atanackovic", Box::new(|x| expand_atanackovic(|s| x.value(s), &mc, t, 0.0, q))),
        (
            "hadamard integer",
            Box::new(|x| hadamard_expand_integer(x, alpha, order, 1.0 + t, HadamardDirection::Derivative)),
        ),
        (
            "hadamard moment",
            Box::new(|x| hadamard_expand_moment(|s| x.value(s), |s| x.derivative(1, s), &hc, 1.0 + t, 1.0, q)),
        ),
    ];
    for (name, op) in &ops {
        let (vf, vg, vh) = (e(op(bundles[0]))?, e(op(bundles[1]))?, e(op(bundles[2]))?);
        linear_close(name, vh, (vf, vg), c)?;
    }
    Ok(())
}

/// `A`, `B` rebuilt from the order `N + 1` coefficients by removing the last
/// series term.
pub fn moment_bookkeeping(alpha: f64, order: usize) -> Check {
    let base = MomentCoeffs::new(alpha, order).map_err(|e| e.to_string())?;
    let ext = MomentCoeffs::new(alpha, order + 1).map_err(|e| e.to_string())?;
    let g1 = gamma(1.0 - alpha).unwrap();
    let g2 = gamma(2.0 - alpha).unwrap();
    let a = ext.a() - a_term(alpha, order + 1) / g1;
    let b = ext.b() - b_term(alpha, order + 1) / g2;
    ensure((a - base.a()).abs() <= 1e-13 * base.a().abs().max(1.0), || format!("A: {a} vs {}", base.a()))?;
    ensure((b - base.b()).abs() <= 1e-13 * base.b().abs().max(1.0), || format!("B: {b} vs {}", base.b()))?;
    for p in 2..=order {
        ensure(base.c(p) == ext.c(p), || format!("C_{p} changed with N"))?;
    }
    Ok(())
}

/// `h * residual` against central differences of `Psi` at `interior`.
/// Components are compared relative to the largest gradient entry.
pub fn gradient_consistency(problem: &DirectProblem, n: usize, interior: &[f64]) -> Check {
    let disc = discretize(problem, n).map_err(|e| e.to_string())?;
    let h = disc.mesh().h();
    let r = disc.residual(interior);
    let mut probe = interior.to_vec();
    let mut fd = Vec::with_capacity(interior.len());
    for k in 0..interior.len() {
        let step = 1e-5 * (1.0 + interior[k].abs());
        probe[k] = interior[k] + step;
        let up = disc.psi(&probe);
        probe[k] = interior[k] - step;
        let down = disc.psi(&probe);
        probe[k] = interior[k];
        fd.push((up - down) / (2.0 * step));
    }
    let scale = fd.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    for (j, (rj, fj)) in r.iter().zip(&fd).enumerate() {
        let analytic = h * rj;
        ensure((analytic - fj).abs() <= 1e-6 * scale, || {
            format!("n = {n}, j = {}: h r = {analytic}, FD = {fj} (scale {scale})", j + 1)
        })?;
    }
    Ok(())
}

/// Grünwald-Letnikov sums are linear in the sampled values.
pub fn gl_linearity(alpha: f64, n: usize, c1: f64, c2: f64) -> Check {
    let mesh = Mesh::new(0.0, 1.0, n).map_err(|e| e.to_string())?;
    let f = mesh.sample(|t| t * t);
    let g = mesh.sample(|t| (3.0 * t).sin());
    let h = mesh.sample(|t| c1 * t * t + c2 * (3.0 * t).sin());
    for i in 0..=n {
        for (name, op) in [("gl_left", gl_left as fn(_, _, _) -> _), ("gl_right", gl_right)] {
            let vf = op(&f, alpha, i).map_err(|e| e.to_string())?;
            let vg = op(&g, alpha, i).map_err(|e| e.to_string())?;
            let vh = op(&h, alpha, i).map_err(|e| e.to_string())?;
            let scale = 1.0 + (c1 * vf).abs() + (c2 * vg).abs();
            ensure((vh - c1 * vf - c2 * vg).abs() <= 1e-12 * scale, || format!("{name} at node {i}"))?;
        }
    }
    Ok(())
}

pub fn error_metrics_symmetric(n: usize, shift: f64) -> Check {
    let mesh = Mesh::new(0.0, 1.0, n).map_err(|e| e.to_string())?;
    let x = mesh.sample(|t| t.sin());
    let y = mesh.sample(|t| t.sin() + shift * t * (1.0 - t));
    let l2 = (l2_error(&x, &y).unwrap(), l2_error(&y, &x).unwrap());
    let mx = (max_error(&x, &y).unwrap(), max_error(&y, &x).unwrap());
    ensure(l2.0 == l2.1 && mx.0 == mx.1, || "asymmetric error metric".into())?;
    ensure(l2_error(&x, &x).unwrap() == 0.0 && max_error(&x, &x).unwrap() == 0.0, || "nonzero self-distance".into())?;
    ensure(shift == 0.0 || (l2.0 > 0.0 && mx.0 > 0.0), || "zero distance between different curves".into())
}

/// Interior values for gradient checks: a smooth admissible curve plus a
/// perturbation, for the direct catalog on `[0, 1]` with `x(0) = 0`, `x(1) = 1`.
pub fn interior_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-0.3f64..0.3, n - 1)
        .prop_map(move |noise| noise.iter().enumerate().map(|(i, d)| (i + 1) as f64 / n as f64 + d).collect())
}

pub fn catalog() -> Vec<(&'static str, DirectProblem)> {
    vec![
        ("example 1", DirectProblem::example1()),
        ("example 2", DirectProblem::example2(0.5).unwrap()),
        ("example 3", DirectProblem::example3()),
    ]
}

/// Runs `check` on `cases` inputs drawn from `strategy` with a fixed seed.
pub fn run_deterministic<S, F>(cases: u32, strategy: S, check: F) -> Check
where
    S: Strategy,
    S::Value: std::fmt::Debug,
    F: Fn(S::Value) -> Check,
{
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    let mut runner = TestRunner::new_with_rng(config, rng);
    runner.run(&strategy, |v| check(v).map_err(TestCaseError::fail)).map_err(|e| e.to_string())
}
