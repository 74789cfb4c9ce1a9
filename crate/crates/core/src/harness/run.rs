//! BER, secrecy-rate and bound runs over an SNR grid.

use super::config::{Mode, SimConfig};
use crate::an::{an_coefficients_with, build_an, normalize_an};
use crate::analysis::codewords::codebook_size;
use crate::analysis::pep::sampled_union_bound;
use crate::analysis::{enumerate_codewords, ergodic_secrecy_rate, EsrParams, UnionBound};
use crate::channel::{complex_gaussian, draw_channel, transmit};
use crate::codec::{bits_per_block, encode_indices};
use crate::constellation::Constellation;
use crate::receiver::{effective_channel, noise_variance_bob, noise_variance_eve, whiten, Detector};
use crate::streams::{Purpose, Streams};
use crate::{Error, Result};
use rand::Rng;
use rayon::prelude::*;
use std::fmt::Write as _;

/// Blocks per parallel work item.
pub const BATCH_BLOCKS: u64 = 1024;
/// Blocks between two evaluations of the stopping rule. Fixed so that the
/// number of blocks run never depends on the worker count.
pub const GROUP_BLOCKS: u64 = 16 * BATCH_BLOCKS;

pub const CSV_HEADER: &str =
    "snr_db,ber_bob,ber_bob_se,ber_eve,ber_eve_se,ber_bound,r_b,r_e,r_s,r_s_se,blocks,bit_errors_bob";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MinBitErrors,
    MaxBlocks,
}

impl StopReason {
    pub fn name(&self) -> &'static str {
        match self {
            StopReason::MinBitErrors => "min_bit_errors",
            StopReason::MaxBlocks => "max_blocks",
        }
    }
}

/// One row of output. Fields a run does not compute stay `None`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CurvePoint {
    pub snr_db: f64,
    pub ber_bob: Option<f64>,
    pub ber_bob_se: Option<f64>,
    pub ber_eve: Option<f64>,
    pub ber_eve_se: Option<f64>,
    pub ber_bound: Option<f64>,
    /// Standard error of a sampled bound; `None` when summed exactly.
    pub ber_bound_se: Option<f64>,
    pub r_b: Option<f64>,
    pub r_b_se: Option<f64>,
    pub r_e: Option<f64>,
    pub r_e_se: Option<f64>,
    pub r_s: Option<f64>,
    pub r_s_se: Option<f64>,
    pub blocks: Option<u64>,
    pub bit_errors_bob: Option<u64>,
    pub bit_errors_eve: Option<u64>,
    pub stop: Option<StopReason>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub mode: Mode,
    pub config: SimConfig,
    pub points: Vec<CurvePoint>,
}

fn field(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn count_field(x: Option<u64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl RunOutput {
    /// Config echo as `#` comments, the header, one row per SNR point, then
    /// per-point run notes as trailing comments.
    pub fn to_csv(&self) -> String {
        let mut s = self.config.echo(self.mode);
        s.push_str(CSV_HEADER);
        s.push('\n');
        for p in &self.points {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                p.snr_db,
                field(p.ber_bob),
                field(p.ber_bob_se),
                field(p.ber_eve),
                field(p.ber_eve_se),
                field(p.ber_bound),
                field(p.r_b),
                field(p.r_e),
                field(p.r_s),
                field(p.r_s_se),
                count_field(p.blocks),
                count_field(p.bit_errors_bob),
            );
        }
        for p in &self.points {
            let mut notes = Vec::new();
            if let Some(stop) = p.stop {
                notes.push(format!("stop = {}", stop.name()));
            }
            if let Some(e) = p.bit_errors_eve {
                notes.push(format!("bit_errors_eve = {e}"));
            }
            if let Some(se) = p.ber_bound_se {
                notes.push(format!("ber_bound_se = {se} (sampled)"));
            }
            if let (Some(b), Some(e)) = (p.r_b_se, p.r_e_se) {
                notes.push(format!("r_b_se = {b}, r_e_se = {e}"));
            }
            if !notes.is_empty() {
                let _ = writeln!(s, "# snr_db {}: {}", p.snr_db, notes.join(", "));
            }
        }
        s
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

fn data_constellation(cfg: &SimConfig) -> Result<Constellation> {
    Constellation::build(cfg.base_kind, cfg.m, cfg.rotation_deg, cfg.symbol_energy())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    blocks: u64,
    bob: u64,
    bob_sq: u64,
    eve: u64,
    eve_sq: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            blocks: self.blocks + o.blocks,
            bob: self.bob + o.bob,
            bob_sq: self.bob_sq + o.bob_sq,
            eve: self.eve + o.eve,
            eve_sq: self.eve_sq + o.eve_sq,
        }
    }
}

/// BER and its standard error from per-block error counts.
fn ber_with_se(errors: u64, errors_sq: u64, blocks: u64, bits: usize) -> (f64, f64) {
    let b = blocks as f64;
    let mean = errors as f64 / b;
    let se = if blocks > 1 {
        let var = ((errors_sq as f64 / b - mean * mean) * b / (b - 1.0)).max(0.0);
        (var / b).sqrt()
    } else {
        0.0
    };
    (mean / bits as f64, se / bits as f64)
}

struct BlockSim<'a> {
    cfg: &'a SimConfig,
    streams: Streams,
    detector: Detector,
    n0: f64,
    hat_b: f64,
    hat_e: f64,
}

impl BlockSim<'_> {
    /// Bit errors of Bob and Eve for block `b`. Every random quantity is
    /// drawn from the block's own streams.
    fn run_block(&self, b: u64) -> Result<(u64, u64)> {
        let cfg = self.cfg;
        let n = cfg.n;
        let c = self.detector.constellation();
        let mut data = self.streams.rng(Purpose::Data, b);
        let combo = data.random_range(0..n / 2);
        let syms: [usize; 4] = std::array::from_fn(|_| data.random_range(0..cfg.m));
        let tx = encode_indices(combo, syms, c, n)?;

        let hb = draw_channel(n, cfg.sigma_sq_bob, &mut self.streams.rng(Purpose::ChannelBob, b))?;
        let ge = draw_channel(n, cfg.sigma_sq_eve, &mut self.streams.rng(Purpose::ChannelEve, b))?;
        let v = complex_gaussian(&mut self.streams.rng(Purpose::An, b), 1.0);
        let coeffs = an_coefficients_with(&hb.h_est, combo, n, cfg.an_sign)?;
        let an = normalize_an(&build_an(coeffs, v, combo, n)?, cfg.alpha, cfg.p_tot)?;

        let errors = |ch: &crate::channel::ChannelState, s2: f64, hat: f64, purpose: Purpose| -> Result<u64> {
            let y = transmit(&tx.codeword, &an, ch, self.n0, &mut self.streams.rng(purpose, b))?;
            let y = whiten(&y, hat, self.n0)?;
            let h = effective_channel(&ch.h_est, s2, hat, self.n0)?;
            let d = self.detector.detect(&y, &h)?;
            Ok(d.bits_hat.iter().zip(&tx.bits).filter(|(a, b)| a != b).count() as u64)
        };
        let eb = errors(&hb, cfg.sigma_sq_bob, self.hat_b, Purpose::NoiseBob)?;
        let ee = errors(&ge, cfg.sigma_sq_eve, self.hat_e, Purpose::NoiseEve)?;
        Ok((eb, ee))
    }

    fn run_range(&self, start: u64, end: u64) -> Result<Tally> {
        let mut t = Tally::default();
        for b in start..end {
            let (eb, ee) = self.run_block(b)?;
            t.blocks += 1;
            t.bob += eb;
            t.bob_sq += eb * eb;
            t.eve += ee;
            t.eve_sq += ee * ee;
        }
        Ok(t)
    }
}

/// Runs blocks `[0, k)` in groups until Bob has `min_bit_errors` errors or
/// `max_blocks` is reached. Block `b` uses the same streams at every SNR.
fn simulate_point(cfg: &SimConfig, c: &Constellation, snr_db: f64) -> Result<CurvePoint> {
    let n0 = cfg.n0(snr_db);
    let sim = BlockSim {
        cfg,
        streams: Streams::new(cfg.seed),
        detector: Detector::new(c.clone(), cfg.n)?,
        n0,
        hat_b: noise_variance_bob(cfg.sigma_sq_bob, cfg.alpha, cfg.p_tot, n0),
        hat_e: noise_variance_eve(cfg.sigma_sq_eve, cfg.alpha, cfg.p_tot, n0),
    };
    let mut total = Tally::default();
    while total.blocks < cfg.max_blocks && total.bob < cfg.min_bit_errors {
        let start = total.blocks;
        let end = (start + GROUP_BLOCKS).min(cfg.max_blocks);
        let starts: Vec<u64> = (start..end).step_by(BATCH_BLOCKS as usize).collect();
        let tallies = starts
            .into_par_iter()
            .map(|s| sim.run_range(s, (s + BATCH_BLOCKS).min(end)))
            .collect::<Result<Vec<_>>>()?;
        total = tallies.into_iter().fold(total, Tally::merge);
    }
    let bits = bits_per_block(cfg.n, cfg.m);
    let (ber_b, se_b) = ber_with_se(total.bob, total.bob_sq, total.blocks, bits);
    let (ber_e, se_e) = ber_with_se(total.eve, total.eve_sq, total.blocks, bits);
    Ok(CurvePoint {
        snr_db,
        ber_bob: Some(ber_b),
        ber_bob_se: Some(se_b),
        ber_eve: Some(ber_e),
        ber_eve_se: Some(se_e),
        blocks: Some(total.blocks),
        bit_errors_bob: Some(total.bob),
        bit_errors_eve: Some(total.eve),
        stop: Some(if total.bob >= cfg.min_bit_errors { StopReason::MinBitErrors } else { StopReason::MaxBlocks }),
        ..CurvePoint::default()
    })
}

/// Union bound per SNR point, `(value, standard error if sampled)`, both
/// clipped to `[0, 0.5]`. Summed exactly when the codebook has at most
/// `bound_exact_cap` members, otherwise estimated from `bound_pairs`
/// uniformly drawn pairs.
fn bound_values(cfg: &SimConfig, c: &Constellation) -> Result<Vec<(f64, Option<f64>)>> {
    let size = codebook_size(cfg.n, cfg.m);
    if size <= cfg.bound_exact_cap.min(cfg.enumeration_cap) {
        let set = enumerate_codewords(cfg.n, c, cfg.enumeration_cap)?;
        let ub = UnionBound::new(&set);
        return Ok(cfg.snr_db_grid.iter().map(|&s| (ub.evaluate(cfg.alpha, cfg.p_tot, cfg.n0(s)), None)).collect());
    }
    let n0s: Vec<f64> = cfg.snr_db_grid.iter().map(|&s| cfg.n0(s)).collect();
    let mut rng = Streams::new(cfg.seed).rng(Purpose::PairSampling, 0);
    let est = sampled_union_bound(cfg.n, c, cfg.alpha, cfg.p_tot, &n0s, cfg.bound_pairs, &mut rng)?;
    Ok(est.into_iter().map(|(m, se)| (m.clamp(0.0, 0.5), Some(se))).collect())
}

/// Monte Carlo BER of Bob and Eve; adds the union bound when `cfg.bound`.
pub fn run_ber(cfg: &SimConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let c = data_constellation(cfg)?;
    let pool = pool(cfg.workers)?;
    let mut points =
        pool.install(|| cfg.snr_db_grid.iter().map(|&s| simulate_point(cfg, &c, s)).collect::<Result<Vec<_>>>())?;
    if cfg.bound {
        for (p, (b, se)) in points.iter_mut().zip(bound_values(cfg, &c)?) {
            p.ber_bound = Some(b);
            p.ber_bound_se = se;
        }
    }
    Ok(RunOutput { mode: Mode::Ber, config: cfg.clone(), points })
}

/// Ergodic rates and secrecy rate per SNR point. The same channel and
/// noise streams are reused at every point.
pub fn run_esr(cfg: &SimConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let c = data_constellation(cfg)?;
    let set = enumerate_codewords(cfg.n, &c, cfg.enumeration_cap)?;
    let streams = Streams::new(cfg.seed);
    let pool = pool(cfg.workers)?;
    let points = pool.install(|| {
        cfg.snr_db_grid
            .iter()
            .map(|&snr_db| {
                let params = EsrParams {
                    alpha: cfg.alpha,
                    p_tot: cfg.p_tot,
                    sigma_sq_bob: cfg.sigma_sq_bob,
                    sigma_sq_eve: cfg.sigma_sq_eve,
                    n0: cfg.n0(snr_db),
                    channel_draws: cfg.channel_draws,
                    noise_samples: cfg.noise_samples,
                };
                let e = ergodic_secrecy_rate(&params, &set, &streams)?;
                Ok(CurvePoint {
                    snr_db,
                    r_b: Some(e.r_b),
                    r_b_se: Some(e.r_b_se),
                    r_e: Some(e.r_e),
                    r_e_se: Some(e.r_e_se),
                    r_s: Some(e.r_s),
                    r_s_se: Some(e.r_s_se),
                    ..CurvePoint::default()
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(RunOutput { mode: Mode::Esr, config: cfg.clone(), points })
}

/// Union bound only.
pub fn run_bound(cfg: &SimConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let c = data_constellation(cfg)?;
    let points = cfg
        .snr_db_grid
        .iter()
        .zip(bound_values(cfg, &c)?)
        .map(|(&snr_db, (b, se))| CurvePoint { snr_db, ber_bound: Some(b), ber_bound_se: se, ..CurvePoint::default() })
        .collect();
    Ok(RunOutput { mode: Mode::Bound, config: cfg.clone(), points })
}

pub fn run(mode: Mode, cfg: &SimConfig) -> Result<RunOutput> {
    match mode {
        Mode::Ber => run_ber(cfg),
        Mode::Esr => run_esr(cfg),
        Mode::Bound => run_bound(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(extra: &str) -> SimConfig {
        SimConfig::parse(&format!("snr_db_grid = 0, 10\nmax_blocks = 3000\nmin_bit_errors = 100\n{extra}")).unwrap()
    }

    #[test]
    fn ber_point_shape_and_stop() {
        let out = run_ber(&small("")).unwrap();
        assert_eq!(out.points.len(), 2);
        for p in &out.points {
            let b = p.ber_bob.unwrap();
            assert!((0.0..=1.0).contains(&b));
            assert!(p.blocks.unwrap() <= 3000);
            assert!(p.stop.is_some());
        }
        assert!(out.points[0].ber_bob > out.points[1].ber_bob);
        let csv = out.to_csv();
        assert!(csv.lines().any(|l| l == CSV_HEADER));
        assert!(!csv.contains("workers"));
    }

    #[test]
    fn stops_at_group_boundary_once_errors_suffice() {
        let cfg = SimConfig::parse("snr_db_grid = 0\nmax_blocks = 1e6\nmin_bit_errors = 200").unwrap();
        let p = &run_ber(&cfg).unwrap().points[0];
        assert_eq!(p.blocks, Some(GROUP_BLOCKS));
        assert_eq!(p.stop, Some(StopReason::MinBitErrors));
        assert!(p.bit_errors_bob.unwrap() >= 200);
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let one = run_ber(&small("workers = 1\nbound = true")).unwrap().to_csv();
        let four = run_ber(&small("workers = 4\nbound = true")).unwrap().to_csv();
        assert_eq!(one, four);
    }

    #[test]
    fn bound_only_fills_bound_column() {
        let out = run_bound(&small("")).unwrap();
        for p in &out.points {
            assert!(p.ber_bound.is_some() && p.ber_bob.is_none() && p.r_b.is_none());
        }
        assert!(out.points[0].ber_bound >= out.points[1].ber_bound);
    }

    #[test]
    fn sampled_bound_is_close_to_exact() {
        let exact = run_bound(&small("")).unwrap();
        let sampled = run_bound(&small("bound_exact_cap = 10\nbound_pairs = 40000")).unwrap();
        for (e, s) in exact.points.iter().zip(&sampled.points) {
            let (e, s, se) = (e.ber_bound.unwrap(), s.ber_bound.unwrap(), s.ber_bound_se.unwrap());
            assert!((e - s).abs() < 4.0 * se, "{e} {s} {se}");
        }
    }

    #[test]
    fn esr_small_budget() {
        let out = run_esr(&small("channel_draws = 4\nnoise_samples = 4")).unwrap();
        for p in &out.points {
            assert!(p.r_s.unwrap() >= 0.0);
            assert!(p.r_b.unwrap() <= 2.25 + 1e-12);
            assert!(p.ber_bob.is_none());
        }
    }
}
