//! Command-line front end for the `pennycrack` solver: configuration,
//! subcommand orchestration and table output.

pub mod config;
pub mod run;
pub mod table;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{ConfigError, OutputFormat, Overrides, RunConfig};
use run::{RunError, RunResult};

#[derive(Debug, Parser)]
#[command(name = "pennycrack", version, about = "Penny-shaped crack wedged open by a rigid disc or annulus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration; flags below override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// `b/a` (disc) or `λ₁` (annulus).
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    #[arg(long = "delta-over-a", global = true)]
    pub delta_over_a: Option<f64>,
    /// Equations per coefficient family.
    #[arg(long = "n-trunc", global = true)]
    pub n_trunc: Option<usize>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<OutputFormat>,
    /// Output file; a directory for `figures`. Defaults to stdout and `figures/`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Pole-removal coefficients.
    Solve,
    /// Normal stress in the crack plane under the disc and ahead of the tip.
    Stress,
    /// Normalized stress intensity factor over a λ sweep.
    Sif,
    /// Crack-face opening for the configured λ values.
    Displacement,
    /// Re-checks every solver invariant; exit code 2 on failure.
    Verify,
    /// Stress, SIF and displacement tables into one directory.
    Figures,
}

impl Cli {
    pub fn config(&self) -> Result<RunConfig, ConfigError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        cfg.apply(&Overrides {
            lambda: self.lambda,
            delta_over_a: self.delta_over_a,
            truncation_n: self.n_trunc,
            output_format: self.format,
        });
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> RunResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn execute(cli: &Cli) -> RunResult<()> {
    let cfg = cli.config()?;
    match cli.command {
        Command::Solve => emit(&cli.out, &run::run_solve(&cfg)?.render(&cfg)),
        Command::Stress => emit(&cli.out, &run::run_stress(&cfg)?.render(cfg.output_format)),
        Command::Sif => {
            let t = run::run_sif_sweep(&cfg, &run::default_sif_lambdas(&cfg))?;
            emit(&cli.out, &t.render(cfg.output_format))
        }
        Command::Displacement => {
            emit(&cli.out, &run::run_displacement(&cfg)?.render(cfg.output_format))
        }
        Command::Verify => {
            let report = run::run_verify(&cfg)?;
            emit(&cli.out, &report.render(cfg.output_format))?;
            if report.passed() {
                Ok(())
            } else {
                Err(RunError::Verification(report))
            }
        }
        Command::Figures => {
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("figures"));
            for path in run::run_figures(&cfg, &dir)? {
                println!("{}", path.display());
            }
            Ok(())
        }
    }
}

/// Parses `args`, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("pennycrack: {e}");
            e.exit_code()
        }
    }
}
