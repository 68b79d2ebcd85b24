use fracvar_core::indirect::{
    analytic_solution_example2, assemble_tpbvp_example2, assemble_tpbvp_example4, exact_solution_example4,
    solve_example2_integer, solve_example2_moment_closed, solve_linear_tpbvp,
};
use fracvar_core::operators::{l2_error, Mesh, SampledCurve};

use super::{sweep, Report};
use crate::config::Settings;
use crate::error::{CliError, RunFailure};

const EXAMPLES: [&str; 3] = ["ex2-moment", "ex2-integer", "ex4-moment"];

fn solve(
    example: &str,
    tpbvp: bool,
    alpha: f64,
    order: usize,
    mesh: &Mesh,
    eps: f64,
) -> fracvar_core::Result<SampledCurve> {
    match (example, tpbvp) {
        ("ex2-integer", _) => {
            let s = solve_example2_integer(alpha, order)?;
            Ok(mesh.sample(|t| s.eval(t)))
        }
        ("ex2-moment", false) => {
            let s = solve_example2_moment_closed(alpha, order)?;
            Ok(mesh.sample(|t| s.eval(t)))
        }
        ("ex2-moment", true) => {
            Ok(solve_linear_tpbvp(&assemble_tpbvp_example2(alpha, order)?, mesh, eps)?.swap_remove(0))
        }
        _ => Ok(solve_linear_tpbvp(&assemble_tpbvp_example4(alpha, order)?, mesh, eps)?.swap_remove(0)),
    }
}

pub fn run(s: &Settings) -> Result<Report, CliError> {
    let example = s.example(&EXAMPLES)?;
    let tpbvp = match (example, s.method(&["auto", "closed", "tpbvp"])?) {
        ("ex2-integer", "tpbvp") => return Err(CliError::Usage("ex2-integer has a closed form only".into())),
        ("ex4-moment", "closed") => return Err(CliError::Usage("ex4-moment is solved by collocation only".into())),
        ("ex4-moment", _) | (_, "tpbvp") => true,
        _ => false,
    };
    let alphas = s.alphas(&[0.5])?;
    let min_order = if example == "ex2-integer" { 1 } else { 2 };
    let orders = s.orders(&[2, 4, 8], min_order)?;
    let meshes = s.meshes(&[400])?;
    let eps = s.eps(1e-4)?;
    if eps >= 1.0 {
        return Err(CliError::Usage(format!("eps must be below 1, got {eps}")));
    }

    let mut points = Vec::with_capacity(alphas.len() * orders.len() * meshes.len());
    for &a in &alphas {
        for &o in &orders {
            points.extend(meshes.iter().map(|&n| (a, o, n)));
        }
    }
    let header = ["alpha", "N", "n", "t", "x", "exact", "abs_error", "l2_error"];
    Ok(sweep(&header, &points, |&(alpha, order, n)| {
        let run = || -> fracvar_core::Result<_> {
            let mesh = Mesh::new(0.0, 1.0, n)?;
            let x = solve(example, tpbvp, alpha, order, &mesh, eps)?;
            let reference = if example == "ex4-moment" {
                mesh.sample(|t| exact_solution_example4(alpha, t))
            } else {
                mesh.sample(|t| analytic_solution_example2(alpha, t))
            };
            let l2 = l2_error(&x, &reference)?;
            Ok(mesh
                .nodes()
                .zip(x.values().iter().zip(reference.values()))
                .map(|(t, (&xv, &e))| {
                    vec![
                        alpha.into(),
                        order.into(),
                        n.into(),
                        t.into(),
                        xv.into(),
                        e.into(),
                        (xv - e).abs().into(),
                        l2.into(),
                    ]
                })
                .collect())
        };
        run().map_err(|e| (RunFailure::new(format!("{example} alpha={alpha} N={order} n={n}"), e), vec![]))
    }))
}
