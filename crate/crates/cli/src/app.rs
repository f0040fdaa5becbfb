use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::check::{oracle_check, OracleCheckParams};
use crate::config::{parse_config, parse_config_str, serialize_config, ConfigFile};
use crate::error::CliError;
use crate::sweep::{run_sweep, single_run_row, write_csv, SweepOptions};
use crate::{EXIT_LEMMA1, EXIT_OK, EXIT_ORACLE};

#[derive(Debug, Parser)]
#[command(name = "twtsim", version, about = "TWT interval assignment simulator")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Override the seed (for `sweep`, replaces the seed list).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Override the number of epochs.
    #[arg(long, global = true)]
    pub epochs: Option<usize>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for sweeps and oracle trials; 0 runs sequentially.
    #[arg(long, global = true, default_value_t = 0)]
    pub parallel: usize,

    /// Check the drift bound every epoch and stop at the first violation.
    #[arg(long, global = true)]
    pub check_lemma1: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation and print its metrics row.
    Run { config: PathBuf },
    /// Run every point of the configured grid and print one row per point.
    Sweep { config: PathBuf },
    /// Compare the greedy scheduler with the exhaustive oracle on random instances.
    OracleCheck {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        max_m: usize,
        #[arg(long, default_value_t = 3)]
        max_l: usize,
        #[arg(long, default_value_t = 2)]
        max_k: usize,
    },
    /// Print the effective configuration (defaults when no file is given).
    PrintConfig { config: Option<PathBuf> },
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| {
            CliError::Io {
                path: p.display().to_string(),
                source,
            }
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn load(path: &Path, g: &GlobalArgs) -> Result<ConfigFile, CliError> {
    apply_overrides(parse_config(path)?, g)
}

fn apply_overrides(mut cfg: ConfigFile, g: &GlobalArgs) -> Result<ConfigFile, CliError> {
    if let Some(seed) = g.seed {
        cfg.sim.seed = seed;
        cfg.sweep.base.seed = seed;
        cfg.sweep.seeds = vec![seed];
    }
    if let Some(epochs) = g.epochs {
        cfg.sim.num_epochs = epochs;
        cfg.sweep.base.num_epochs = epochs;
        cfg.sim.validate()?;
    }
    Ok(cfg)
}

fn write_text(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    let mut out = output(path)?;
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|source| CliError::Io {
            path: "output".to_string(),
            source,
        })
}

/// Runs a parsed command line and returns the process exit code.
pub fn execute(cli: Cli) -> Result<i32, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Run { config } => {
            let cfg = load(config, g)?;
            let row = single_run_row(&cfg.sim, g.check_lemma1);
            if row.lemma1_violated {
                eprintln!("{}", row.error.as_deref().unwrap_or("drift bound violated"));
                return Ok(EXIT_LEMMA1);
            }
            if let Some(e) = &row.error {
                return Err(CliError::Config {
                    key: "config",
                    reason: e.clone(),
                });
            }
            write_csv(std::slice::from_ref(&row), output(&g.out)?)?;
            Ok(EXIT_OK)
        }
        Command::Sweep { config } => {
            let cfg = load(config, g)?;
            let opts = SweepOptions {
                threads: g.parallel,
                check_lemma1: g.check_lemma1,
            };
            let rows = run_sweep(&cfg.sweep, opts);
            write_csv(&rows, output(&g.out)?)?;
            if rows.iter().any(|r| r.lemma1_violated) {
                eprintln!("drift bound violated in at least one sweep point");
                return Ok(EXIT_LEMMA1);
            }
            Ok(EXIT_OK)
        }
        Command::OracleCheck {
            trials,
            max_m,
            max_l,
            max_k,
        } => {
            let params = OracleCheckParams {
                trials: *trials,
                max_m: *max_m,
                max_l: *max_l,
                max_k: *max_k,
                seed: g.seed.unwrap_or(1),
            };
            let report = oracle_check(&params, g.parallel);
            write_text(&g.out, &report.to_string())?;
            if !report.errors.is_empty() && report.counterexamples.is_empty() {
                return Err(CliError::Config {
                    key: "max_m",
                    reason: "instances exceed the oracle enumeration budget".to_string(),
                });
            }
            Ok(if report.all_passed() {
                EXIT_OK
            } else {
                EXIT_ORACLE
            })
        }
        Command::PrintConfig { config } => {
            let cfg = match config {
                Some(p) => load(p, g)?,
                None => apply_overrides(parse_config_str("")?, g)?,
            };
            write_text(&g.out, &serialize_config(&cfg))?;
            Ok(EXIT_OK)
        }
    }
}
