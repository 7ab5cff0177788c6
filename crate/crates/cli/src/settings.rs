use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use carnot_core::gauge::QuadratureGrid;
use carnot_core::{GroupSpec, Side};
use clap::Args;
use serde::Deserialize;

/// Options shared by every subcommand. Any of them may also come from `--config`.
#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Options {
    /// Built-in group name (h1, h2, ..., free3, ...)
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// JSON group description
    #[arg(long, global = true)]
    pub group_file: Option<PathBuf>,
    /// Polynomial text or preset name
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// Second polynomial for pair commands
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub poly2: Option<String>,
    #[arg(long, global = true)]
    pub side: Option<Side>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub rmin: Option<f64>,
    #[arg(long, global = true)]
    pub rmax: Option<f64>,
    /// Number of grid points
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// What to scan: d or average (scan-d), functional or pt (heat)
    #[arg(long, global = true)]
    pub quantity: Option<String>,
    /// Highest degree for basis sweeps
    #[arg(long, global = true)]
    pub degree: Option<u32>,
    /// Disk |z|^2 <= R for the sign check, as a rational
    #[arg(long, global = true)]
    pub disk: Option<String>,
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub paths: Option<usize>,
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// Comma-separated observation times
    #[arg(long, global = true, value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    #[serde(skip)]
    pub deterministic: bool,
    #[arg(skip)]
    #[serde(rename = "deterministic")]
    pub deterministic_config: Option<bool>,
    /// Exit with status 1 unless the outcome matches
    #[arg(long, global = true)]
    pub expect: Option<String>,
    #[arg(long, global = true)]
    pub radial_order: Option<usize>,
    #[arg(long, global = true)]
    pub theta_order: Option<usize>,
    #[arg(long, global = true)]
    pub phi_order: Option<usize>,
    /// JSON file with defaults for any of these options
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

macro_rules! prefer {
    ($a:ident, $b:ident; $($f:ident),*) => {
        $( if $a.$f.is_none() { $a.$f = $b.$f.clone(); } )*
    };
}

impl Options {
    /// Fills unset flags from the config file, if any.
    pub fn resolve(mut self) -> Result<Self> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let file: Options = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        prefer!(self, file; group, group_file, poly, poly2, side, alpha, rmin, rmax, n, quantity,
            degree, disk, csv, seed, paths, dt, times, threads, expect, radial_order, theta_order,
            phi_order);
        self.deterministic = self.deterministic || file.deterministic_config.unwrap_or(false);
        Ok(self)
    }

    pub fn spec(&self) -> Result<GroupSpec> {
        match (&self.group, &self.group_file) {
            (Some(_), Some(_)) => bail!("use either --group or --group-file"),
            (_, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading group file {}", path.display()))?;
                Ok(GroupSpec::from_json(&text)?)
            }
            (name, None) => Ok(GroupSpec::builtin(name.as_deref().unwrap_or("h1"))?),
        }
    }

    pub fn grid(&self) -> QuadratureGrid {
        let d = QuadratureGrid::default();
        QuadratureGrid {
            radial_order: self.radial_order.unwrap_or(d.radial_order),
            theta_order: self.theta_order.unwrap_or(d.theta_order),
            phi_order: self.phi_order.unwrap_or(d.phi_order),
        }
    }
}
