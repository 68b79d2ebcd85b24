//! Run parameters: a TOML file with one section per subcommand, overlaid by
//! command-line flags.

use std::path::{Path, PathBuf};

use fracvar_core::functions::TestFunction;
use fracvar_core::quadrature::Quadrature;
use serde::Deserialize;

use crate::error::CliError;

/// A scalar or a list in the config file; `alpha = 0.5` and `alpha = [0.5]`
/// mean the same.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> From<OneOrMany<T>> for Vec<T> {
    fn from(v: OneOrMany<T>) -> Self {
        match v {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(xs) => xs,
        }
    }
}

/// Every key a section may carry. Keys a command does not use are ignored.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub alpha: Option<OneOrMany<f64>>,
    #[serde(rename = "N")]
    pub orders: Option<OneOrMany<usize>>,
    pub n: Option<OneOrMany<usize>>,
    pub function: Option<String>,
    pub method: Option<String>,
    pub example: Option<String>,
    pub eps: Option<f64>,
    pub tol: Option<f64>,
    pub points: Option<usize>,
    pub quad: Option<String>,
    pub quad_n: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Params {
    /// Fields set in `top` replace those in `self`.
    pub fn overlay(self, top: Params) -> Params {
        Params {
            alpha: top.alpha.or(self.alpha),
            orders: top.orders.or(self.orders),
            n: top.n.or(self.n),
            function: top.function.or(self.function),
            method: top.method.or(self.method),
            example: top.example.or(self.example),
            eps: top.eps.or(self.eps),
            tol: top.tol.or(self.tol),
            points: top.points.or(self.points),
            quad: top.quad.or(self.quad),
            quad_n: top.quad_n.or(self.quad_n),
            out: top.out.or(self.out),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct ConfigFile {
    table_b: Option<Params>,
    derivative: Option<Params>,
    direct: Option<Params>,
    indirect: Option<Params>,
    bounds: Option<Params>,
}

/// Reads the section for `command` (e.g. `"table-b"`) from a config file.
/// A file without that section yields empty parameters.
pub fn load_section(path: &Path, command: &str) -> Result<Params, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_section(&text, command).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}

fn parse_section(text: &str, command: &str) -> Result<Params, String> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| e.to_string())?;
    let section = match command {
        "table-b" => file.table_b,
        "derivative" => file.derivative,
        "direct" => file.direct,
        "indirect" => file.indirect,
        "bounds" => file.bounds,
        other => return Err(format!("unknown command section '{other}'")),
    };
    Ok(section.unwrap_or_default())
}

fn sorted_unique_f64(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn sorted_unique(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Resolved parameters with validation. Sweep lists come back sorted and
/// deduplicated so that output order does not depend on input order.
#[derive(Debug, Clone)]
pub struct Settings {
    params: Params,
}

impl Settings {
    pub fn new(params: Params) -> Self {
        Settings { params }
    }

    pub fn alphas(&self, default: &[f64]) -> Result<Vec<f64>, CliError> {
        let v: Vec<f64> = self.params.alpha.clone().map(Vec::from).unwrap_or_else(|| default.to_vec());
        if v.is_empty() {
            return Err(CliError::Usage("alpha list is empty".into()));
        }
        if let Some(bad) = v.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(CliError::Usage(format!("alpha must lie in (0, 1), got {bad}")));
        }
        Ok(sorted_unique_f64(v))
    }

    pub fn orders(&self, default: &[usize], min: usize) -> Result<Vec<usize>, CliError> {
        let v: Vec<usize> = self.params.orders.clone().map(Vec::from).unwrap_or_else(|| default.to_vec());
        if v.is_empty() {
            return Err(CliError::Usage("N list is empty".into()));
        }
        if let Some(bad) = v.iter().find(|&&n| n < min) {
            return Err(CliError::Usage(format!("N must be at least {min}, got {bad}")));
        }
        Ok(sorted_unique(v))
    }

    pub fn meshes(&self, default: &[usize]) -> Result<Vec<usize>, CliError> {
        let v: Vec<usize> = self.params.n.clone().map(Vec::from).unwrap_or_else(|| default.to_vec());
        if v.is_empty() {
            return Err(CliError::Usage("n list is empty".into()));
        }
        if let Some(bad) = v.iter().find(|&&n| n < 2) {
            return Err(CliError::Usage(format!("n must be at least 2, got {bad}")));
        }
        Ok(sorted_unique(v))
    }

    pub fn function(&self, default: &str) -> Result<TestFunction, CliError> {
        let id = self.params.function.as_deref().unwrap_or(default);
        id.parse().map_err(|e: fracvar_core::Error| CliError::Usage(e.to_string()))
    }

    /// The selected id from `allowed`; the first entry is the default.
    pub fn choice<'a>(&self, key: &str, value: Option<&str>, allowed: &[&'a str]) -> Result<&'a str, CliError> {
        let id = value.unwrap_or(allowed[0]);
        allowed
            .iter()
            .find(|&&a| a == id)
            .copied()
            .ok_or_else(|| CliError::Usage(format!("unknown {key} '{id}' (expected one of {})", allowed.join(", "))))
    }

    pub fn method<'a>(&self, allowed: &[&'a str]) -> Result<&'a str, CliError> {
        self.choice("method", self.params.method.as_deref(), allowed)
    }

    pub fn example<'a>(&self, allowed: &[&'a str]) -> Result<&'a str, CliError> {
        self.choice("example", self.params.example.as_deref(), allowed)
    }

    pub fn positive(&self, key: &str, value: Option<f64>, default: f64) -> Result<f64, CliError> {
        let v = value.unwrap_or(default);
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(CliError::Usage(format!("{key} must be positive, got {v}")))
        }
    }

    pub fn eps(&self, default: f64) -> Result<f64, CliError> {
        self.positive("eps", self.params.eps, default)
    }

    pub fn tol(&self, default: f64) -> Result<f64, CliError> {
        self.positive("tol", self.params.tol, default)
    }

    pub fn points(&self, default: usize) -> Result<usize, CliError> {
        match self.params.points.unwrap_or(default) {
            0 => Err(CliError::Usage("points must be at least 1".into())),
            p => Ok(p),
        }
    }

    pub fn quadrature(&self) -> Result<Quadrature, CliError> {
        let panels = self.params.quad_n.unwrap_or(64);
        if panels == 0 {
            return Err(CliError::Usage("quad_n must be at least 1".into()));
        }
        match self.choice("quadrature", self.params.quad.as_deref(), &["gauss", "trapezoid"])? {
            "gauss" => Ok(Quadrature::Gauss(panels)),
            _ => Ok(Quadrature::Trapezoid(panels)),
        }
    }

    pub fn out(&self) -> Option<&Path> {
        self.params.out.as_deref()
    }
}
