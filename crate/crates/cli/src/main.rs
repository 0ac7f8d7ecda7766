//! `cmera`: data tables for Gaussian cMERA states.
//!
//! Exit codes: 0 ok, 2 configuration error, 3 numerical failure.

mod commands;
mod config;
mod table;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use commands::FitKind;
use config::{ConfigError, Output, RunConfig, Settings};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cmera", version, about = "Correlators and entanglement entropy of Gaussian cMERA states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

/// Every setting can also come from `--config FILE` (lines of `key = value`,
/// keys as the flag names); flags override the file.
#[derive(Args)]
struct Common {
    /// boson1d | boson2d | fermion1d | fermion2d
    #[arg(long, global = true)]
    theory: Option<String>,
    /// target | product | cmera
    #[arg(long, global = true)]
    state: Option<String>,
    #[arg(long, global = true)]
    lambda: Option<String>,
    #[arg(long, global = true)]
    sigma: Option<String>,
    #[arg(long, global = true)]
    j: Option<String>,
    /// Infrared regulator (boson1d only)
    #[arg(long, global = true)]
    epsilon: Option<String>,
    /// Lattice spacing a
    #[arg(long, global = true)]
    spacing: Option<String>,
    /// Comma-separated spacings for `convergence`
    #[arg(long, global = true)]
    spacings: Option<String>,
    /// Angular truncation (2D only)
    #[arg(long, global = true)]
    lmax: Option<String>,
    /// Lower end of the x (or k) grid
    #[arg(long, global = true)]
    xmin: Option<String>,
    #[arg(long, global = true)]
    xmax: Option<String>,
    #[arg(long, global = true)]
    points: Option<String>,
    /// Region size for `convergence`
    #[arg(long, global = true)]
    x0: Option<String>,
    /// Fit window `lo,hi`
    #[arg(long, global = true)]
    window: Option<String>,
    /// csv | json
    #[arg(long, global = true)]
    output: Option<String>,
    #[arg(long, global = true)]
    out_file: Option<PathBuf>,
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// alpha(k) or theta(k) for the target, product and cMERA states
    Profile,
    /// Contact coefficient and smooth part of the two-point functions
    Correlator {
        #[arg(long)]
        channel: Option<String>,
    },
    /// Entanglement entropy of intervals (1D) or discs (2D)
    Entropy {
        /// Per angular-momentum block rows (2D)
        #[arg(long)]
        blocks: bool,
    },
    /// Entropy at x0 for several spacings, with the convergence slope
    Convergence,
    /// Short-distance entropy estimate
    Estimate,
    /// Fit a column of a table written by this tool; prints a JSON report
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "central-charge")]
        kind: Kind,
        #[arg(long, default_value = "x")]
        xcol: String,
        #[arg(long, default_value = "S")]
        ycol: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Power,
    Log,
    CentralCharge,
}

fn settings(cli: &Cli) -> Result<Settings> {
    let mut s = Settings::default();
    let c = &cli.common;
    if let Some(p) = &c.config {
        s.load_file(p)?;
    }
    let flags = [
        ("theory", &c.theory),
        ("state", &c.state),
        ("lambda", &c.lambda),
        ("sigma", &c.sigma),
        ("j", &c.j),
        ("epsilon", &c.epsilon),
        ("spacing", &c.spacing),
        ("spacings", &c.spacings),
        ("lmax", &c.lmax),
        ("xmin", &c.xmin),
        ("xmax", &c.xmax),
        ("points", &c.points),
        ("x0", &c.x0),
        ("window", &c.window),
        ("output", &c.output),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            s.set(k, v.as_str())?;
        }
    }
    match &cli.command {
        Command::Correlator { channel: Some(ch) } => s.set("channel", ch.as_str())?,
        Command::Entropy { blocks: true } => s.set("blocks", "true")?,
        _ => {}
    }
    Ok(s)
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = RunConfig::resolve(&settings(cli)?)?;
    let text = match &cli.command {
        Command::Profile => commands::profile(&cfg)?.render(cfg.output)?,
        Command::Correlator { .. } => commands::correlator(&cfg)?.render(cfg.output)?,
        Command::Entropy { .. } => commands::entropy(&cfg)?.render(cfg.output)?,
        Command::Convergence => commands::convergence(&cfg)?.render(cfg.output)?,
        Command::Estimate => commands::estimate(&cfg)?.render(cfg.output)?,
        Command::Fit { input, kind, xcol, ycol } => {
            let data = std::fs::read_to_string(input)
                .map_err(|e| ConfigError(format!("cannot read {}: {e}", input.display())))?;
            let kind = match kind {
                Kind::Power => FitKind::Power,
                Kind::Log => FitKind::Log,
                Kind::CentralCharge => FitKind::CentralCharge,
            };
            if cfg.output == Output::Csv && cli.common.output.is_some() {
                return config::config_err("fit reports are JSON only");
            }
            serde_json::to_string_pretty(&commands::fit(&cfg, &data, xcol, ycol, kind)?)? + "\n"
        }
    };
    match &cli.common.out_file {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if let Some(c) = e.downcast_ref::<cmera_core::Error>() {
        return if c.is_numerical() { 3 } else { 2 };
    }
    if e.downcast_ref::<ConfigError>().is_some() {
        return 2;
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_error_class() {
        let numerical = anyhow::Error::new(cmera_core::Error::Eigen("x".into()));
        let input = anyhow::Error::new(cmera_core::Error::InsufficientPoints { needed: 5, found: 1 });
        let cfg = anyhow::Error::new(ConfigError("bad".into()));
        assert_eq!(exit_code(&numerical), 3);
        assert_eq!(exit_code(&input), 2);
        assert_eq!(exit_code(&cfg), 2);
        assert_eq!(exit_code(&cfg.context("wrapped")), 2);
        assert_eq!(exit_code(&anyhow::anyhow!("io")), 1);
    }
}
