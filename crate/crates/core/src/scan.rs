//! Sampled functionals on a grid of radii or times and their monotonicity verdicts.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const MIN_POINTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Nondecreasing,
    Nonincreasing,
    Nonmonotone,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Nondecreasing => "nondecreasing",
            Verdict::Nonincreasing => "nonincreasing",
            Verdict::Nonmonotone => "nonmonotone",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

impl std::str::FromStr for Verdict {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nondecreasing" => Ok(Verdict::Nondecreasing),
            "nonincreasing" => Ok(Verdict::Nonincreasing),
            "nonmonotone" => Ok(Verdict::Nonmonotone),
            "inconclusive" => Ok(Verdict::Inconclusive),
            other => invalid(format!("unknown verdict '{other}'")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Per-point standard errors for statistical scans.
    pub stderr: Option<Vec<f64>>,
    pub finite_difference: Vec<f64>,
    /// Verdict of each prefix of the scan.
    pub running: Vec<Verdict>,
    pub verdict: Verdict,
    pub tol: f64,
}

impl ScanReport {
    /// Deterministic scan with relative tolerance `tol`.
    pub fn from_values(grid: Vec<f64>, values: Vec<f64>, tol: f64) -> Result<Self> {
        check_grid(&grid)?;
        if values.len() != grid.len() {
            return invalid("one value per grid point expected");
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Degenerate("scan produced a non-finite value".into()));
        }
        let running = (0..values.len())
            .map(|i| classify(&values[..=i], tol))
            .collect();
        Ok(Self {
            finite_difference: differences(&grid, &values),
            verdict: classify(&values, tol),
            running,
            grid,
            values,
            stderr: None,
            tol,
        })
    }

    /// Statistical scan: consecutive values only need to be ordered up to `k` standard errors.
    pub fn from_estimates(grid: Vec<f64>, values: Vec<f64>, stderr: Vec<f64>, k: f64) -> Result<Self> {
        check_grid(&grid)?;
        if values.len() != grid.len() || stderr.len() != grid.len() {
            return invalid("one value and one standard error per grid point expected");
        }
        let running = (0..values.len())
            .map(|i| classify_with_errors(&values[..=i], &stderr[..=i], k))
            .collect();
        Ok(Self {
            finite_difference: differences(&grid, &values),
            verdict: classify_with_errors(&values, &stderr, k),
            running,
            grid,
            values,
            stderr: Some(stderr),
            tol: k,
        })
    }

    /// Fraction of steps on which the value moves strictly in the given direction.
    pub fn strict_fraction(&self, direction: Verdict) -> f64 {
        let steps = self.values.windows(2);
        let n = steps.len().max(1);
        let hits = steps
            .filter(|w| match direction {
                Verdict::Nondecreasing => w[1] > w[0],
                Verdict::Nonincreasing => w[1] < w[0],
                _ => false,
            })
            .count();
        hits as f64 / n as f64
    }
}

/// Evaluates `f` on the grid in parallel; values come back in grid order.
pub fn monotonicity_scan<F>(grid: &[f64], f: F, tol: f64) -> Result<ScanReport>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    check_grid(grid)?;
    let values = grid.par_iter().map(|&r| f(r)).collect::<Result<Vec<_>>>()?;
    ScanReport::from_values(grid.to_vec(), values, tol)
}

pub fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < MIN_POINTS {
        return invalid(format!("scan grid needs at least {MIN_POINTS} points, got {}", grid.len()));
    }
    if grid.iter().any(|r| !r.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return invalid("scan grid must be finite and strictly increasing");
    }
    Ok(())
}

fn scale(values: &[f64]) -> f64 {
    let m = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if m == 0.0 {
        1.0
    } else {
        m
    }
}

pub fn classify(values: &[f64], tol: f64) -> Verdict {
    if values.len() < 2 {
        return Verdict::Inconclusive;
    }
    let eps = tol * scale(values);
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if hi - lo <= eps {
        return Verdict::Inconclusive;
    }
    let up = values.windows(2).all(|w| w[1] >= w[0] - eps);
    let down = values.windows(2).all(|w| w[1] <= w[0] + eps);
    verdict_of(up, down)
}

pub fn classify_with_errors(values: &[f64], stderr: &[f64], k: f64) -> Verdict {
    if values.len() < 2 {
        return Verdict::Inconclusive;
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if hi - lo <= DEFAULT_TOL * scale(values) {
        return Verdict::Inconclusive;
    }
    let pairs = || values.windows(2).zip(stderr.windows(2));
    let up = pairs().all(|(v, s)| v[1] + k * s[1] >= v[0] - k * s[0]);
    let down = pairs().all(|(v, s)| v[1] - k * s[1] <= v[0] + k * s[0]);
    verdict_of(up, down)
}

fn verdict_of(up: bool, down: bool) -> Verdict {
    match (up, down) {
        (true, true) => Verdict::Inconclusive,
        (true, false) => Verdict::Nondecreasing,
        (false, true) => Verdict::Nonincreasing,
        (false, false) => Verdict::Nonmonotone,
    }
}

fn differences(grid: &[f64], values: &[f64]) -> Vec<f64> {
    let n = grid.len();
    (0..n)
        .map(|i| {
            let (a, b) = if i + 1 < n { (i, i + 1) } else { (i - 1, i) };
            (values[b] - values[a]) / (grid[b] - grid[a])
        })
        .collect()
}

/// `n` equally spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
