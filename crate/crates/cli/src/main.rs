mod commands;
mod output;
mod settings;

use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use settings::Options;

/// Symbolic and numerical checks for polynomials on step-two Carnot groups.
#[derive(Parser, Debug)]
#[command(name = "carnot", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Fields, Laplacians and carré du champ of a polynomial
    Identities,
    /// Bochner residuals over a harmonic basis or one polynomial
    Bochner,
    /// Symbolic checks of the gauge
    GaugeVerify,
    /// Normalizing constant from the ball integral
    Omega,
    /// Monotonicity scan of the weighted Dirichlet energy or the surface average
    ScanD,
    /// Monotonicity scan of the two-phase product
    ScanAcf,
    /// Frequency scan and two-term decomposition
    Frequency,
    /// Orthogonality defect for a pair of homogeneous harmonics
    OrthoDefect,
    /// Heat-flow functional or P_t estimates by Monte Carlo
    Heat,
    /// Smallest constant in the product bound over a grid
    ProbeConjecture,
}

fn run(cli: Cli) -> Result<String> {
    let opts = cli.options.resolve()?;
    if let Some(n) = opts.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let outcome = match cli.command {
        Command::Identities => commands::identities(&opts)?,
        Command::Bochner => commands::bochner(&opts)?,
        Command::GaugeVerify => commands::gauge_verify(&opts)?,
        Command::Omega => commands::omega(&opts)?,
        Command::ScanD => commands::scan_d(&opts)?,
        Command::ScanAcf => commands::scan_acf(&opts)?,
        Command::Frequency => commands::frequency(&opts)?,
        Command::OrthoDefect => commands::ortho_defect(&opts)?,
        Command::Heat => commands::heat(&opts)?,
        Command::ProbeConjecture => commands::probe_conjecture(&opts)?,
    };
    println!("outcome: {outcome}");
    if let Some(expected) = &opts.expect {
        if expected != &outcome {
            eprintln!("expected outcome '{expected}', got '{outcome}'");
            return Err(Mismatch.into());
        }
    }
    Ok(outcome)
}

#[derive(Debug, thiserror::Error)]
#[error("outcome mismatch")]
struct Mismatch;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) if e.is::<Mismatch>() => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
