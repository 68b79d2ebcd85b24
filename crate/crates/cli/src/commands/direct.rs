use fracvar_core::direct::{example3_exact, solve_direct, DirectOptions, DirectProblem};
use fracvar_core::indirect::analytic_solution_example2;
use fracvar_core::operators::max_error;

use super::{product, sweep, Report, Rows};
use crate::config::Settings;
use crate::error::{CliError, RunFailure};
use crate::table::Cell;

const EXAMPLES: [&str; 3] = ["ex1", "ex2", "ex3"];

fn problem(example: &str, alpha: f64) -> fracvar_core::Result<DirectProblem> {
    match example {
        "ex1" => Ok(DirectProblem::example1()),
        "ex2" => DirectProblem::example2(alpha),
        _ => Ok(DirectProblem::example3()),
    }
}

fn exact(example: &str, alpha: f64, t: f64) -> f64 {
    match example {
        "ex1" => t * t,
        "ex2" => analytic_solution_example2(alpha, t),
        _ => example3_exact(t),
    }
}

pub fn run(s: &Settings) -> Result<Report, CliError> {
    let example = s.example(&EXAMPLES)?;
    let alphas = s.alphas(&[0.5])?;
    if example != "ex2" && alphas != [0.5] {
        return Err(CliError::Usage(format!("{example} is posed for alpha = 0.5 only")));
    }
    let linear = s.method(&["newton", "linear"])? == "linear";
    let opts = DirectOptions { newton_tol: s.tol(1e-10)?, linear, ..DirectOptions::default() };
    let points = product(&alphas, &s.meshes(&[5, 10, 20, 40])?);

    let header = ["alpha", "n", "t", "x", "exact", "abs_error", "max_error", "converged"];
    Ok(sweep(&header, &points, |&(alpha, n)| {
        let solved = problem(example, alpha).and_then(|p| solve_direct(&p, n, opts));
        match solved {
            Ok(curve) => {
                let reference = curve.mesh().sample(|t| exact(example, alpha, t));
                let max = max_error(&curve, &reference).expect("same mesh");
                let rows: Rows = curve
                    .mesh()
                    .nodes()
                    .zip(curve.values().iter().zip(reference.values()))
                    .map(|(t, (&x, &e))| {
                        vec![
                            alpha.into(),
                            n.into(),
                            t.into(),
                            x.into(),
                            e.into(),
                            (x - e).abs().into(),
                            max.into(),
                            true.into(),
                        ]
                    })
                    .collect();
                Ok(rows)
            }
            Err(e) => {
                let nan = Cell::Float(f64::NAN);
                let marker = vec![alpha.into(), n.into(), nan, nan, nan, nan, nan, false.into()];
                Err((RunFailure::new(format!("{example} alpha={alpha} n={n}"), e), vec![marker]))
            }
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{OneOrMany, Params};

    fn direct(example: &str, n: Vec<usize>) -> Report {
        run(&Settings::new(Params { example: Some(example.into()), n: Some(OneOrMany::Many(n)), ..Params::default() }))
            .unwrap()
    }

    fn max_errors(r: &Report) -> Vec<f64> {
        let mut v: Vec<(usize, f64)> = r
            .table
            .rows()
            .iter()
            .map(|row| match (row[1], row[6]) {
                (Cell::Int(n), Cell::Float(m)) => (n, m),
                _ => panic!(),
            })
            .collect();
        v.dedup();
        v.into_iter().map(|(_, m)| m).collect()
    }

    #[test]
    fn example1_converges() {
        let errs = max_errors(&direct("ex1", vec![40, 5, 20, 10]));
        assert_eq!(errs.len(), 4);
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    }

    #[test]
    fn example3_converged_flag() {
        let r = direct("ex3", vec![30]);
        assert!(r.failures.is_empty());
        assert!(r.table.rows().iter().all(|row| row[7] == Cell::Bool(true)));
        assert_eq!(r.table.rows().len(), 31);
    }

    #[test]
    fn alpha_only_for_example2() {
        let s = Settings::new(Params {
            example: Some("ex1".into()),
            alpha: Some(OneOrMany::One(0.3)),
            ..Params::default()
        });
        assert!(run(&s).is_err());
    }

    #[test]
    fn failure_reported_per_run() {
        let s = Settings::new(Params {
            example: Some("ex3".into()),
            n: Some(OneOrMany::Many(vec![4, 10])),
            tol: Some(1e-300),
            ..Params::default()
        });
        let r = run(&s).unwrap();
        assert_eq!(r.failures.len(), 2);
        assert!(r.table.rows().iter().all(|row| row[7] == Cell::Bool(false)));
    }
}
