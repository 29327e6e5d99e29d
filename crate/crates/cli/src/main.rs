//! `anticross`: run an experiment from a config file and export CSV tables.

mod artifact;
mod bundle;
mod config;
mod experiments;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::artifact::write_table;
use crate::config::{is_writable_dir, RunConfig, DEFAULT_FULL_ORACLE_MAX_N};
use crate::experiments::Run;

#[derive(Debug, Parser)]
#[command(
    name = "anticross",
    version,
    about = "Anti-crossing gap experiments on structured MIS instances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lowest levels of H_C^sym and H_core, and the bare energies.
    Spectrum {
        #[command(flatten)]
        run: RunArgs,
        /// Levels per Hamiltonian.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Ground-state weights on the blocks of H_C^sym.
    Blockproj(RunArgs),
    /// Gap of every chain member along the schedule, with located minima.
    Gapscan(RunArgs),
    /// Level paths of the quasi-interpolated Hamiltonian in λ.
    Gevp(RunArgs),
    /// Invariant suites; exits nonzero when any suite fails.
    Verify(RunArgs),
    /// Gap scaling over a family of growing instances.
    Scaling(RunArgs),
    /// Figure manifest over the CSV files in an output directory.
    Bundle {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON or TOML instance config.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if absent.
    #[arg(long)]
    out: PathBuf,
    /// Number of grid points in t, overriding the config.
    #[arg(long)]
    grid: Option<usize>,
    /// Largest qubit count for the full 2^n Hamiltonian.
    #[arg(long)]
    full_oracle_max_n: Option<usize>,
}

fn prepare(args: &RunArgs, k: Option<usize>) -> Result<Run> {
    let mut config = RunConfig::load(&args.config)?;
    if let Some(steps) = args.grid {
        config.grid.steps = steps;
    }
    if k.is_some() {
        config.k = k;
    }
    if args.full_oracle_max_n.is_some() {
        config.full_oracle_max_n = args.full_oracle_max_n;
    }
    config.validate()?;
    is_writable_dir(&args.out)?;
    let spec = config.spec()?;
    let ts = config.schedule()?.grid;
    let full_oracle_max_n = config
        .full_oracle_max_n
        .unwrap_or(DEFAULT_FULL_ORACLE_MAX_N);
    Ok(Run {
        config,
        spec,
        ts,
        full_oracle_max_n,
    })
}

fn execute(cli: Cli) -> Result<bool> {
    let (name, args, k) = match &cli.command {
        Command::Bundle { out } => {
            let manifest = bundle::emit_figure_bundle(out)?;
            for f in &manifest.figures {
                println!(
                    "figure {}: {}",
                    f.name,
                    f.series
                        .iter()
                        .map(|s| s.csv.as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                );
            }
            println!("wrote {}", out.join("manifest.json").display());
            return Ok(true);
        }
        Command::Spectrum { run, k } => ("spectrum", run, *k),
        Command::Blockproj(a) => ("blockproj", a, None),
        Command::Gapscan(a) => ("gapscan", a, None),
        Command::Gevp(a) => ("gevp", a, None),
        Command::Verify(a) => ("verify", a, None),
        Command::Scaling(a) => ("scaling", a, None),
    };
    let run = prepare(args, k)?;
    let (tables, ok) = match name {
        "spectrum" => (experiments::spectrum(&run)?, true),
        "blockproj" => (experiments::blockproj(&run)?, true),
        "gapscan" => (experiments::gapscan(&run)?, true),
        "gevp" => (experiments::gevp(&run)?, true),
        "verify" => {
            let (t, failed) = experiments::verify(&run)?;
            (t, !failed)
        }
        _ => (experiments::scaling(&run)?, true),
    };
    let settings = json!({
        "grid": run.config.grid,
        "k": run.config.k,
        "full_oracle_max_n": run.full_oracle_max_n,
        "lambda_steps": run.config.lambda_steps,
        "family_m_l": run.config.family_m_l,
    });
    for table in &tables {
        let a = write_table(&args.out, table, name, &run.spec, &settings)?;
        println!(
            "wrote {} ({} rows x {} columns)",
            a.path.display(),
            a.rows,
            a.columns
        );
        if name == "verify" {
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(|c| c.render()).collect();
                println!("  {}", cells.join(" "));
            }
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
