use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use etaforge::config::{Format, Model, RunConfig};
use etaforge::report::Report;
use etaforge::{run, ConfigError};

#[derive(Parser)]
#[command(
    name = "etaforge",
    version,
    about = "Verification suites for eta invariants, subspace indices and mod-n indices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// TOML run configuration
    #[arg(long)]
    config: PathBuf,
    /// overrides run.seed
    #[arg(long)]
    seed: Option<u64>,
    /// overrides output.dir
    #[arg(long)]
    out: Option<PathBuf>,
    /// overrides output.format
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// η of the configured model (s1: arithmetic spectra and the jump family; t3: dδ − δd)
    Eta(Common),
    /// Toeplitz and relative indices, the index formula, and the axioms of d
    Index(Common),
    /// the mod-n index theorem and the normal-form structure
    Modn(Common),
    /// fractional part of d, half-integrality, antipodal action
    Fractional(Common),
    /// all of the above on both models
    VerifyAll(Common),
}

fn threads() -> Result<Option<usize>, ConfigError> {
    match std::env::var("ETAFORGE_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(ConfigError(format!("ETAFORGE_THREADS must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(None),
    }
}

fn execute(cli: Cli) -> Result<Report, ConfigError> {
    let (name, common) = match cli.command {
        Command::Eta(c) => ("eta", c),
        Command::Index(c) => ("index", c),
        Command::Modn(c) => ("modn", c),
        Command::Fractional(c) => ("fractional", c),
        Command::VerifyAll(c) => ("verify-all", c),
    };
    let mut cfg = RunConfig::load(&common.config)?;
    if let Some(s) = common.seed {
        cfg.run.seed = s;
    }
    if let Some(d) = common.out {
        cfg.output.dir = d;
    }
    if let Some(f) = common.format {
        cfg.output.format = f;
    }
    if let Some(n) = threads()? {
        etaforge::cap_threads(n)?;
    }
    let models = if name == "verify-all" { vec![Model::S1, Model::T3] } else { vec![cfg.run.model] };
    Ok(run(name, cfg, &models))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let report = match execute(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("etaforge: {e}");
            return ExitCode::from(2);
        }
    };
    let path = match report.emit(&report.config.output.dir, report.config.output.format) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("etaforge: cannot write report: {e}");
            return ExitCode::from(2);
        }
    };
    let failed: Vec<_> = report.failures().collect();
    println!("{}: {} rows, {} failed, report at {}", report.command, report.rows.len(), failed.len(), path.display());
    if failed.is_empty() {
        return ExitCode::SUCCESS;
    }
    for r in failed {
        eprintln!("FAIL {} {} {} [{}]: {} vs {}", r.module, r.check, r.example_id, r.reference, r.lhs, r.rhs);
    }
    ExitCode::from(1)
}
