//! Configuration-driven runs: BER sweeps, secrecy-rate sweeps, union
//! bounds, and CSV output.

pub mod config;
pub mod run;

pub use config::{Mode, RawConfig, SimConfig};
pub use run::{run, run_ber, run_bound, run_esr, CurvePoint, RunOutput, StopReason, CSV_HEADER};

use crate::{Error, Result};
use std::path::{Path, PathBuf};

/// `results/run.csv` with index 3 becomes `results/run.3.csv`.
pub fn sweep_path(out: &Path, index: usize) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}.{index}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{index}"),
    };
    out.with_file_name(name)
}

/// Runs every configuration of the cartesian product in `raw` with the
/// mode given by its `mode` key. Returns the outputs in expansion order.
pub fn sweep(raw: &RawConfig) -> Result<Vec<RunOutput>> {
    let configs = raw.expand().iter().map(SimConfig::from_raw).collect::<Result<Vec<_>>>()?;
    configs
        .iter()
        .map(|cfg| {
            let mode =
                cfg.mode.ok_or_else(|| Error::Config("sweep requires a `mode` key (ber, esr or bound)".into()))?;
            run(mode, cfg)
        })
        .collect()
}

pub fn write_csv(path: &Path, output: &RunOutput) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, output.to_csv())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_names() {
        assert_eq!(sweep_path(Path::new("out/run.csv"), 3), PathBuf::from("out/run.3.csv"));
        assert_eq!(sweep_path(Path::new("run"), 0), PathBuf::from("run.0"));
    }

    #[test]
    fn sweep_requires_mode() {
        let raw = RawConfig::parse("alpha = 0.3, 0.9").unwrap();
        assert!(matches!(sweep(&raw), Err(Error::Config(_))));
    }

    #[test]
    fn sweep_runs_each_combination() {
        let raw = RawConfig::parse("mode = bound\nalpha = 0.3, 0.9\nsnr_db_grid = 0, 10").unwrap();
        let outs = sweep(&raw).unwrap();
        assert_eq!(outs.len(), 2);
        assert_eq!(outs[0].config.alpha, 0.3);
        assert!(outs[1].to_csv().contains("# alpha = 0.9\n"));
    }
}
