//! One module per subcommand. Each returns the full result table plus the
//! sweep points that failed.

mod bounds;
mod derivative;
mod direct;
mod indirect;
mod table_b;

use rayon::prelude::*;

use crate::config::Settings;
use crate::error::{CliError, RunFailure};
use crate::table::{Cell, Table};

#[derive(Debug)]
pub struct Report {
    pub table: Table,
    pub failures: Vec<RunFailure>,
}

pub fn run(command: &str, settings: &Settings) -> Result<Report, CliError> {
    match command {
        "table-b" => table_b::run(settings),
        "derivative" => derivative::run(settings),
        "direct" => direct::run(settings),
        "indirect" => indirect::run(settings),
        "bounds" => bounds::run(settings),
        other => Err(CliError::Usage(format!("unknown command '{other}'"))),
    }
}

type Rows = Vec<Vec<Cell>>;

/// Evaluates independent sweep points in parallel. Rows keep the order of
/// `points`; a failed point contributes its fallback rows (possibly none).
fn sweep<P, F>(header: &[&str], points: &[P], f: F) -> Report
where
    P: Sync,
    F: Fn(&P) -> Result<Rows, (RunFailure, Rows)> + Sync + Send,
{
    let results: Vec<_> = points.par_iter().map(f).collect();
    let mut table = Table::new(header.iter().copied());
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(rows) => table.extend(rows),
            Err((failure, rows)) => {
                table.extend(rows);
                failures.push(failure);
            }
        }
    }
    Report { table, failures }
}

fn product<A: Copy, B: Copy>(xs: &[A], ys: &[B]) -> Vec<(A, B)> {
    xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect()
}
