use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use superposition_xor::harness::{self, RunConfig, OUT_DIR_ENV};
use superposition_xor::Result;

/// Simulate and analyse the single-photon superposition XOR game.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// TOML config file; unset keys take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed, overriding the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory, overriding the config and the environment.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores); never changes results.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form win probabilities.
    Analytic,
    /// One simulated experimental run.
    Run,
    /// Simulated and predicted win rate across test-photon purity.
    PuritySweep,
    /// Running confidence over repeated event streams.
    Confidence,
    /// Simulated HOM, phase-reference and efficiency calibrations.
    Calibrate,
}

fn load(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(dir) = std::env::var_os(OUT_DIR_ENV) {
        cfg.out_dir = dir.into();
    }
    if let Some(dir) = &cli.out {
        cfg.out_dir = dir.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = load(cli)?;
    match cli.command {
        Command::Analytic => {
            let r = harness::cmd_analytic(&cfg)?;
            println!("P_win (configured)            = {:.5}", r.configured);
            println!("P_win (pure, V = {})        = {:.5}  (reported {})", harness::REFERENCE_VISIBILITY, r.at_reference_visibility, harness::REFERENCE_PWIN);
            println!("P_win (ideal)                 = {:.5}", r.ideal);
            println!("P_win (dephased)              = {:.5}", r.classical);
            println!("purity floor                  = {:.5}", r.purity_floor);
        }
        Command::Run => {
            let r = harness::cmd_run(&cfg)?;
            println!(
                "{} instances: win rate {:.4} +- {:.4} (std {:.4}), model {:.5}",
                r.summary.n, r.summary.mean, r.summary.sem, r.summary.std, r.model
            );
        }
        Command::PuritySweep => {
            let r = harness::cmd_purity_sweep(&cfg)?;
            for p in &r.points {
                println!(
                    "purity {:.4}: {:.4} +- {:.4}  model {:.4}",
                    p.purity, p.simulated.mean, p.simulated.sem, p.model
                );
            }
        }
        Command::Confidence => {
            let r = harness::cmd_confidence(&cfg)?;
            match r.first_above_target {
                Some(n) => println!("median confidence exceeds {} after {n} events", harness::CONFIDENCE_TARGET),
                None => println!("median confidence never exceeds {}", harness::CONFIDENCE_TARGET),
            }
            println!("residual slope {:.4} per event, R^2 {:.4}", r.residual_fit.slope, r.residual_fit.r_squared);
        }
        Command::Calibrate => {
            let r = harness::cmd_calibrate(&cfg)?;
            println!("HOM visibility {:.4} +- {:.4}", r.hom.visibility, r.hom.visibility_uncertainty);
            println!("phase setpoints 0: {:.4} V, pi: {:.4} V", r.setpoints.zero, r.setpoints.pi);
            println!("efficiencies {:?}", r.efficiencies.as_array());
        }
    }
    println!("wrote {}", cfg.out_dir.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
