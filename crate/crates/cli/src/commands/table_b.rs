use fracvar_core::expansions::MomentCoeffs;

use super::{product, sweep, Report};
use crate::config::Settings;
use crate::error::{CliError, RunFailure};

const ALPHAS: [f64; 6] = [0.1, 0.3, 0.5, 0.7, 0.9, 0.99];
const ORDERS: [usize; 7] = [4, 7, 15, 30, 70, 120, 170];

pub fn run(s: &Settings) -> Result<Report, CliError> {
    let points = product(&s.alphas(&ALPHAS)?, &s.orders(&ORDERS, 1)?);
    Ok(sweep(&["alpha", "N", "B"], &points, |&(alpha, n)| {
        MomentCoeffs::new(alpha, n)
            .map(|c| vec![vec![alpha.into(), n.into(), c.b().into()]])
            .map_err(|e| (RunFailure::new(format!("alpha={alpha} N={n}"), e), vec![]))
    }))
}
