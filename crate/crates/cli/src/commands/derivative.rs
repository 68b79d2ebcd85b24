use fracvar_core::expansions::{
    expand_atanackovic, expand_integer_left, expand_moment_left, hadamard_expand_integer, hadamard_expand_moment,
    HadamardDirection, HadamardMomentCoeffs, MomentCoeffs,
};
use fracvar_core::functions::{DerivativeBundle, TestFunction};
use fracvar_core::operators::{diethelm_caputo, gl_left, Mesh};
use fracvar_core::specfun::gamma;

use super::{product, sweep, Report, Rows};
use crate::config::Settings;
use crate::error::{CliError, RunFailure};

const METHODS: [&str; 7] =
    ["integer", "moment", "atanackovic", "hadamard-moment", "hadamard-integer", "gl", "diethelm"];

#[derive(Debug, Clone, Copy, PartialEq)]
enum Family {
    /// Left Riemann-Liouville on [0, 1].
    Rl,
    /// Left Caputo on [0, 1].
    Caputo,
    /// Left Hadamard on [1, 2].
    Hadamard,
}

fn family(method: &str) -> Family {
    match method {
        "diethelm" => Family::Caputo,
        "hadamard-moment" | "hadamard-integer" => Family::Hadamard,
        _ => Family::Rl,
    }
}

fn exact(f: TestFunction, fam: Family, alpha: f64, t: f64) -> fracvar_core::Result<f64> {
    match fam {
        Family::Rl => f.rl_left_exact(alpha, t),
        Family::Caputo => Ok(f.rl_left_exact(alpha, t)? - f.value(0.0) * t.powf(-alpha) / gamma(1.0 - alpha)?),
        Family::Hadamard => f.hadamard_left_exact(alpha, t, 1.0),
    }
}

fn row(alpha: f64, param: usize, t: f64, exact: f64, approx: f64) -> Vec<crate::table::Cell> {
    vec![alpha.into(), param.into(), t.into(), exact.into(), approx.into(), (approx - exact).abs().into()]
}

pub fn run(s: &Settings) -> Result<Report, CliError> {
    let f = s.function("t4")?;
    let method = s.method(&METHODS)?;
    let fam = family(method);
    let alphas = s.alphas(&[0.5])?;
    let probe = if fam == Family::Hadamard { 1.5 } else { 0.5 };
    exact(f, fam, alphas[0], probe)
        .map_err(|e| CliError::Usage(format!("no reference derivative of {f} for method {method}: {e}")))?;

    if matches!(method, "gl" | "diethelm") {
        let points = product(&alphas, &s.meshes(&[100, 200, 400])?);
        return Ok(sweep(&["alpha", "n", "t", "exact", "approx", "abs_error"], &points, |&(alpha, n)| {
            mesh_method(f, method, alpha, n).map_err(|e| (RunFailure::new(format!("alpha={alpha} n={n}"), e), vec![]))
        }));
    }

    let orders = s.orders(&[1, 2, 3, 4], 1)?;
    let grid = s.points(100)?;
    let quad = s.quadrature()?;
    let points = product(&alphas, &orders);
    Ok(sweep(&["alpha", "N", "t", "exact", "approx", "abs_error"], &points, |&(alpha, order)| {
        let run = || -> fracvar_core::Result<Rows> {
            let start = if fam == Family::Hadamard { 1.0 } else { 0.0 };
            let mc = MomentCoeffs::new(alpha, order);
            let hc = HadamardMomentCoeffs::new(alpha, order);
            (1..=grid)
                .map(|i| {
                    let t = start + i as f64 / grid as f64;
                    let x = |s: f64| f.value(s);
                    let xdot = |s: f64| f.derivative(1, s);
                    let approx = match method {
                        "integer" => expand_integer_left(&f, alpha, order, t, 0.0)?,
                        "moment" => expand_moment_left(x, xdot, mc.as_ref().map_err(Clone::clone)?, t, 0.0, quad)?,
                        "atanackovic" => expand_atanackovic(x, mc.as_ref().map_err(Clone::clone)?, t, 0.0, quad)?,
                        "hadamard-moment" => {
                            hadamard_expand_moment(x, xdot, hc.as_ref().map_err(Clone::clone)?, t, 1.0, quad)?
                        }
                        _ => hadamard_expand_integer(&f, alpha, order, t, HadamardDirection::Derivative)?,
                    };
                    Ok(row(alpha, order, t, exact(f, fam, alpha, t)?, approx))
                })
                .collect()
        };
        run().map_err(|e| (RunFailure::new(format!("alpha={alpha} N={order}"), e), vec![]))
    }))
}

fn mesh_method(f: TestFunction, method: &str, alpha: f64, n: usize) -> fracvar_core::Result<Rows> {
    let mesh = Mesh::new(0.0, 1.0, n)?;
    let curve = mesh.sample(|t| f.value(t));
    let fam = family(method);
    (1..=n)
        .map(|i| {
            let t = mesh.node(i);
            let approx = if method == "gl" {
                gl_left(&curve, alpha, i)?
            } else {
                diethelm_caputo(&curve, alpha, &[f.value(0.0)], i)?
            };
            Ok(row(alpha, n, t, exact(f, fam, alpha, t)?, approx))
        })
        .collect()
}
