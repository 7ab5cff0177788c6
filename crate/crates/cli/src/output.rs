use std::path::Path;

use anyhow::{Context, Result};
use carnot_core::heat::Estimate;
use carnot_core::ScanReport;

/// Twelve significant digits, trailing zeros dropped.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{e}")
    }
}

pub fn print_scan(label: &str, report: &ScanReport) {
    println!("{label}");
    println!("{:>16} {:>20} {:>20}", "r", "value", "finite_difference");
    for i in 0..report.grid.len() {
        println!(
            "{:>16} {:>20} {:>20}",
            num(report.grid[i]),
            num(report.values[i]),
            num(report.finite_difference[i])
        );
    }
    println!("verdict: {}", report.verdict);
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))
}

pub fn write_scan_csv(path: &Path, report: &ScanReport) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["r", "value", "finite_difference", "verdict_running"])?;
    for i in 0..report.grid.len() {
        w.write_record([
            num(report.grid[i]),
            num(report.values[i]),
            num(report.finite_difference[i]),
            report.running[i].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_estimates_csv(path: &Path, est: &[Estimate]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["t", "estimate", "stderr"])?;
    for e in est {
        w.write_record([num(e.t), num(e.mean), num(e.stderr)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_rows_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| num(*v)))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::num;

    #[test]
    fn significant_digits() {
        assert_eq!(num(std::f64::consts::PI / 2.0), "1.57079632679");
        assert_eq!(num(0.0), "0");
        assert_eq!(num(2.0), "2");
        assert_eq!(num(-0.25), "-0.25");
        assert_eq!(num(1.0e-9), "1e-9");
        assert_eq!(num(123456.0), "123456");
    }
}
