//! Run configuration: a JSON file merged under command-line flags.

use crate::Failure;
use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Count,
    TorsorMap,
    Peyre,
    Equidist,
    Asymptotics,
    Verify,
    PlotData,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    LocalFactors,
    Sum1,
    ManinRatio,
    AssemblyCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Naive,
    Direct,
    Torsor,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Tables that `plot-data` can write.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PlotKind {
    ManinRatio,
    Sum1,
    Equidist,
    LocalFactors,
    Padic,
    OmegaMc,
    Jacobian,
    Subsets,
}

/// Every knob of a run. The same struct is parsed from flags and from the
/// config file; unset fields fall through to the file, then to defaults.
#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Subcommand, when given in the config file instead of on the command line
    #[arg(skip)]
    pub command: Option<CommandName>,
    #[arg(skip)]
    pub task: Option<Task>,

    /// Height bound
    #[arg(long = "B", global = true)]
    #[serde(rename = "B")]
    pub bound: Option<u64>,
    /// Comma-separated list of height bounds
    #[arg(long = "B-grid", global = true, value_delimiter = ',')]
    #[serde(rename = "B_grid")]
    pub bound_grid: Option<Vec<u64>>,
    #[arg(long, global = true)]
    pub method: Option<Method>,
    /// Smallest prime of a prime range
    #[arg(long, global = true)]
    pub pmin: Option<u64>,
    /// Largest prime in Euler products, or the top of a prime range
    #[arg(long, global = true)]
    pub pmax: Option<u64>,
    /// Relative tolerance for quadrature and the constant assembly
    #[arg(long = "tol", global = true)]
    pub tolerance: Option<f64>,
    /// Geometric grid parameter of the equidistribution experiment
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Exponent of the log(B)^A cutoffs
    #[arg(long = "A", global = true)]
    #[serde(rename = "A")]
    pub a: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to MANINLAB_THREADS, then to the core count
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the artifact here instead of stdout
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true)]
    pub format: Option<Format>,

    /// Smallest X of the equidistribution grid (X doubles up to xmax)
    #[arg(long, global = true)]
    pub xmin: Option<f64>,
    #[arg(long, global = true)]
    pub xmax: Option<f64>,
    /// Comma-separated moduli q
    #[arg(long, global = true, value_delimiter = ',')]
    pub qgrid: Option<Vec<u64>>,
    /// The coprimality parameter b of D_b
    #[arg(long = "b", global = true)]
    #[serde(rename = "b")]
    pub b_param: Option<u64>,

    /// Point x0,x1,x2,x3 to map to the torsor
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub point: Option<Vec<i64>>,
    /// Tuple eta1,...,eta10 to map to the surface
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub tuple: Option<Vec<i64>>,
    /// Emit every point (or tuple) as CSV instead of the count
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub audit: Option<bool>,

    #[arg(long, global = true)]
    pub kind: Option<PlotKind>,
    /// Quasi-Monte Carlo points per replicate, or Monte Carlo samples
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    #[arg(long, global = true)]
    pub replicates: Option<u64>,
    /// Largest exponent n for p-adic densities
    #[arg(long, global = true)]
    pub nmax: Option<u32>,
}

macro_rules! overlay {
    ($top:expr, $base:expr, $($f:ident),+) => {
        Settings { $($f: $top.$f.or($base.$f)),+ }
    };
}

impl Settings {
    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: Settings) -> Settings {
        overlay!(
            self, base, command, task, bound, bound_grid, method, pmin, pmax, tolerance, delta, a, seed, threads,
            output, format, xmin, xmax, qgrid, b_param, point, tuple, audit, kind, samples, replicates, nmax
        )
    }

    pub fn from_file(path: &Path) -> Result<Settings> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read config {}: {e}", path.display())))?;
        let s = serde_json::from_str(&text)
            .map_err(|e| Failure::Config(format!("bad config {}: {e}", path.display())))?;
        Ok(s)
    }

    pub fn thread_count(&self) -> Result<Option<usize>> {
        if let Some(n) = self.threads {
            return Ok(Some(n));
        }
        match std::env::var("MANINLAB_THREADS") {
            Ok(v) => {
                let n = v
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Failure::Config(format!("MANINLAB_THREADS must be a thread count, got {v:?}")))?;
                Ok(Some(n))
            }
            Err(_) => Ok(None),
        }
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

pub fn require<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| Failure::Config(format!("missing {what}")).into())
}

pub fn positive(x: f64, what: &str) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Failure::Config(format!("{what} must be positive and finite, got {x}")).into())
    }
}

pub fn read_settings(flags: Settings, file: Option<&Path>) -> Result<Settings> {
    match file {
        Some(p) => Ok(flags.over(Settings::from_file(p).context("loading config")?)),
        None => Ok(flags),
    }
}
