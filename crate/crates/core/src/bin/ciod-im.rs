use ciod_im::harness::{run, sweep, sweep_path, write_csv, Mode, RawConfig, RunOutput, SimConfig};
use ciod_im::Result;
use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ciod-im", version, about = "CIOD-IM link simulation: BER, secrecy rate and union bound")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo BER of Bob and Eve over the SNR grid
    Ber(Common),
    /// Ergodic rates and secrecy rate over the SNR grid
    Esr(Common),
    /// Union bound on Bob's BER over the SNR grid
    Bound(Common),
    /// Cartesian product over list-valued keys; runs the config's `mode`
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// Configuration file (`key = value` lines)
    #[arg(long)]
    config: PathBuf,
    /// Output CSV; a sweep writes `<stem>.<k>.<ext>`. Prints to stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed, overrides the config
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads, overrides the config
    #[arg(long)]
    workers: Option<usize>,
}

fn load(common: &Common) -> Result<RawConfig> {
    let mut raw = RawConfig::from_path(&common.config)?;
    if let Some(seed) = common.seed {
        raw.set("seed", vec![seed.to_string()]);
    }
    if let Some(workers) = common.workers {
        raw.set("workers", vec![workers.to_string()]);
    }
    Ok(raw)
}

fn emit(out: Option<&PathBuf>, output: &RunOutput) -> Result<()> {
    match out {
        Some(path) => write_csv(path, output),
        None => {
            std::io::stdout().write_all(output.to_csv().as_bytes())?;
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    let (mode, common) = match &cli.command {
        Command::Ber(c) => (Some(Mode::Ber), c),
        Command::Esr(c) => (Some(Mode::Esr), c),
        Command::Bound(c) => (Some(Mode::Bound), c),
        Command::Sweep(c) => (None, c),
    };
    let raw = load(common)?;
    match mode {
        Some(mode) => {
            let cfg = SimConfig::from_raw(&raw)?;
            emit(common.out.as_ref(), &run(mode, &cfg)?)
        }
        None => {
            let outputs = sweep(&raw)?;
            for (k, output) in outputs.iter().enumerate() {
                emit(common.out.as_ref().map(|p| sweep_path(p, k)).as_ref(), output)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ciod-im: {e}");
            ExitCode::FAILURE
        }
    }
}
