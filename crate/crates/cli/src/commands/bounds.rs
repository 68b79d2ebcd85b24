use fracvar_core::expansions::{
    bound_hadamard, bound_integer, bound_moment, expand_integer_left, expand_moment_left, hadamard_expand_moment,
    HadamardMomentCoeffs, MomentCoeffs,
};
use fracvar_core::functions::{max_abs_on, DerivativeBundle, TestFunction};

use super::{product, sweep, Report, Rows};
use crate::config::Settings;
use crate::error::{CliError, RunFailure};

const METHODS: [&str; 3] = ["integer", "moment", "hadamard"];

/// Samples per subinterval when searching for the derivative maxima in the bounds.
const MAX_SAMPLES: usize = 50;

fn exact(f: TestFunction, method: &str, alpha: f64, t: f64) -> fracvar_core::Result<f64> {
    if method == "hadamard" {
        f.hadamard_left_exact(alpha, t, 1.0)
    } else {
        f.rl_left_exact(alpha, t)
    }
}

/// `(approx, bound)` at `t` for one method.
fn evaluate(
    f: TestFunction,
    method: &str,
    alpha: f64,
    order: usize,
    t: f64,
    s: &Settings,
) -> fracvar_core::Result<(f64, f64)> {
    let quad = s.quadrature().expect("validated before the sweep");
    let x = |s: f64| f.value(s);
    let xdot = |s: f64| f.derivative(1, s);
    match method {
        "integer" => {
            let m = max_abs_on(|s| f.derivative(order + 1, s), 0.0, t, MAX_SAMPLES);
            Ok((expand_integer_left(&f, alpha, order, t, 0.0)?, bound_integer(m, alpha, order, t, 0.0)))
        }
        "moment" => {
            let coeffs = MomentCoeffs::new(alpha, order)?;
            let l2 = max_abs_on(|s| f.derivative(2, s), 0.0, t, MAX_SAMPLES);
            Ok((expand_moment_left(x, xdot, &coeffs, t, 0.0, quad)?, bound_moment(l2, alpha, order, t, 0.0)))
        }
        _ => {
            let coeffs = HadamardMomentCoeffs::new(alpha, order)?;
            let l = max_abs_on(|s| f.derivative(1, s) + s * f.derivative(2, s), 1.0, t, MAX_SAMPLES);
            Ok((hadamard_expand_moment(x, xdot, &coeffs, t, 1.0, quad)?, bound_hadamard(l, alpha, order, t, 1.0)))
        }
    }
}

/// A node counts as dominated when `|error| <= bound + tol (1 + |exact|)`;
/// the slack absorbs rounding where the bound itself is at or near zero.
pub fn run(s: &Settings) -> Result<Report, CliError> {
    let f = s.function("t4")?;
    let method = s.method(&METHODS)?;
    let alphas = s.alphas(&[0.5])?;
    let orders = s.orders(&[2, 3, 4, 5, 6, 7, 8, 9, 10], if method == "integer" { 1 } else { 2 })?;
    let grid = s.points(100)?;
    let slack = s.tol(1e-12)?;
    s.quadrature()?;
    let start = if method == "hadamard" { 1.0 } else { 0.0 };
    exact(f, method, alphas[0], start + 0.5)
        .map_err(|e| CliError::Usage(format!("no reference derivative of {f} for method {method}: {e}")))?;

    let header = ["alpha", "N", "t", "exact", "approx", "abs_error", "bound", "dominated"];
    Ok(sweep(&header, &product(&alphas, &orders), |&(alpha, order)| {
        let run = || -> fracvar_core::Result<Rows> {
            (1..=grid)
                .map(|i| {
                    let t = start + i as f64 / grid as f64;
                    let ex = exact(f, method, alpha, t)?;
                    let (approx, bound) = evaluate(f, method, alpha, order, t, s)?;
                    let err = (approx - ex).abs();
                    let dominated = err <= bound + slack * (1.0 + ex.abs());
                    Ok(vec![
                        alpha.into(),
                        order.into(),
                        t.into(),
                        ex.into(),
                        approx.into(),
                        err.into(),
                        bound.into(),
                        dominated.into(),
                    ])
                })
                .collect()
        };
        run().map_err(|e| (RunFailure::new(format!("alpha={alpha} N={order}"), e), vec![]))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{OneOrMany, Params};
    use crate::table::Cell;

    fn bounds(function: &str, method: &str, order: usize) -> Report {
        run(&Settings::new(Params {
            function: Some(function.into()),
            method: Some(method.into()),
            orders: Some(OneOrMany::One(order)),
            ..Params::default()
        }))
        .unwrap()
    }

    fn all_dominated(r: &Report) -> bool {
        r.table.rows().iter().all(|row| row[7] == Cell::Bool(true))
    }

    #[test]
    fn t4_integer_bound_vanishes() {
        let r = bounds("t4", "integer", 4);
        assert!(all_dominated(&r));
        for row in r.table.rows() {
            assert_eq!(row[6], Cell::Float(0.0));
            let Cell::Float(e) = row[5] else { panic!() };
            assert!(e <= 1e-9);
        }
    }

    #[test]
    fn dominance_examples() {
        assert!(all_dominated(&bounds("exp2t", "moment", 10)));
        assert!(all_dominated(&bounds("lnt", "hadamard", 8)));
        assert!(all_dominated(&bounds("t2", "hadamard", 3)));
    }
}
