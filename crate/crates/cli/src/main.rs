//! `fracvar`: reproduces the coefficient table, derivative approximations,
//! direct and indirect solutions and truncation-bound checks as CSV.
//!
//! Exit codes: 0 when every sweep point completed, 1 for usage errors, 2 when
//! at least one sweep point failed numerically. Diagnostics go to stderr as
//! one JSON object per line.

mod commands;
mod config;
mod error;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use config::{OneOrMany, Params, Settings};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "fracvar", version, about = "Fractional derivative and variational problem experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coefficient B(alpha, N) of the moment expansion over a grid.
    TableB(Args),
    /// Approximate fractional derivatives of a test function against the exact one.
    Derivative(Args),
    /// Direct method on a catalog example.
    Direct(Args),
    /// Indirect (expansion-based) solutions of a catalog example.
    Indirect(Args),
    /// Truncation error against its analytic bound.
    Bounds(Args),
}

#[derive(Debug, clap::Args)]
struct Args {
    /// TOML file with a section per subcommand, e.g. [table-b]. Flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fractional orders, comma separated.
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Expansion orders, comma separated.
    #[arg(long = "N", value_delimiter = ',')]
    orders: Option<Vec<usize>>,
    /// Mesh sizes (number of subintervals), comma separated.
    #[arg(long = "n", value_delimiter = ',')]
    meshes: Option<Vec<usize>>,
    /// Test function: t<k>, exp<k>t or lnt.
    #[arg(long)]
    function: Option<String>,
    /// Approximation or solution method (subcommand specific).
    #[arg(long)]
    method: Option<String>,
    /// Catalog example (direct: ex1|ex2|ex3; indirect: ex2-moment|ex2-integer|ex4-moment).
    #[arg(long)]
    example: Option<String>,
    /// Offset of the collocation start from the singular left end.
    #[arg(long)]
    eps: Option<f64>,
    /// Newton tolerance (direct) or relative dominance slack (bounds).
    #[arg(long)]
    tol: Option<f64>,
    /// Evaluation points for expansion sweeps.
    #[arg(long)]
    points: Option<usize>,
    /// Moment quadrature rule: gauss or trapezoid.
    #[arg(long)]
    quad: Option<String>,
    /// Panels of the moment quadrature rule.
    #[arg(long)]
    quad_n: Option<usize>,
}

impl Args {
    fn into_params(self) -> (Option<PathBuf>, Params) {
        let params = Params {
            alpha: self.alpha.map(OneOrMany::Many),
            orders: self.orders.map(OneOrMany::Many),
            n: self.meshes.map(OneOrMany::Many),
            function: self.function,
            method: self.method,
            example: self.example,
            eps: self.eps,
            tol: self.tol,
            points: self.points,
            quad: self.quad,
            quad_n: self.quad_n,
            out: self.out,
        };
        (self.config, params)
    }
}

fn report_error(kind: &str, message: &str, run: Option<&str>) {
    let mut v = json!({ "kind": kind, "message": message });
    if let Some(run) = run {
        v["run"] = json!(run);
    }
    eprintln!("{v}");
}

fn execute(name: &str, args: Args) -> Result<usize, CliError> {
    let (config, flags) = args.into_params();
    let file = match &config {
        Some(path) => config::load_section(path, name)?,
        None => Params::default(),
    };
    let settings = Settings::new(file.overlay(flags));
    let report = commands::run(name, &settings)?;

    let write_err = |e: &dyn std::fmt::Display| CliError::Usage(format!("cannot write output: {e}"));
    match settings.out() {
        Some(path) => {
            let f =
                File::create(path).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(f);
            report.table.write_csv(&mut w).map_err(|e| write_err(&e))?;
            w.flush().map_err(|e| write_err(&e))?;
        }
        None => {
            let stdout = io::stdout();
            report.table.write_csv(stdout.lock()).map_err(|e| write_err(&e))?;
        }
    }
    for f in &report.failures {
        report_error("numerical", &f.message, Some(&f.run));
    }
    Ok(report.failures.len())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report_error("usage", e.render().to_string().trim_end(), None);
            return ExitCode::from(1);
        }
    };
    let (name, args) = match cli.command {
        Command::TableB(a) => ("table-b", a),
        Command::Derivative(a) => ("derivative", a),
        Command::Direct(a) => ("direct", a),
        Command::Indirect(a) => ("indirect", a),
        Command::Bounds(a) => ("bounds", a),
    };
    match execute(name, args) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(2),
        Err(e) => {
            report_error(e.kind(), &e.to_string(), None);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
