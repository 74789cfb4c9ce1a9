//! Mutual information of the whitened links and the ergodic secrecy rate.
//!
//! For a fixed effective channel `h~` and codebook `{X_n}`,
//!
//! `I = log2 K - (1/K) sum_n E_n~[ log2 sum_n2 exp(-(||h~(X_n - X_n2) + n~||^2 - ||n~||^2) / N0) ]`
//!
//! with `K` the codebook size. The inner sum is evaluated in the log domain.
//! The ergodic rates average `I / 4` over independent channel draws.

use super::codewords::CodewordSet;
use crate::channel::{complex_gaussian, draw_channel};
use crate::matrix::norm_sq;
use crate::receiver::{effective_channel, noise_variance_bob, noise_variance_eve};
use crate::streams::{Purpose, Streams};
use crate::{Complex64, Error, Result, SlotVector, SLOTS};
use rand::Rng;
use rayon::prelude::*;
use std::f64::consts::LN_2;

/// Monte Carlo estimate of `I(y~; X)` in bits per block.
pub fn mutual_information<R: Rng + ?Sized>(
    h_eff: &[Complex64],
    set: &CodewordSet,
    n0: f64,
    noise_samples: usize,
    rng: &mut R,
) -> Result<f64> {
    if h_eff.len() != set.antennas() {
        return Err(Error::DimensionMismatch { expected: set.antennas(), got: h_eff.len() });
    }
    if !(n0 > 0.0) {
        return Err(Error::NonPositiveVariance(n0));
    }
    if noise_samples == 0 {
        return Err(Error::Config("noise_samples must be >= 1".into()));
    }
    let rx: Vec<SlotVector> = set.members().iter().map(|x| x.premultiply(h_eff)).collect();
    let k = rx.len();
    let mut dist = vec![0.0; k];
    let mut total = 0.0;
    for s_n in &rx {
        for _ in 0..noise_samples {
            let noise: SlotVector = std::array::from_fn(|_| complex_gaussian(rng, n0));
            let u: SlotVector = std::array::from_fn(|t| s_n[t] + noise[t]);
            let mut d_min = f64::INFINITY;
            for (d, s2) in dist.iter_mut().zip(&rx) {
                let mut acc = 0.0;
                for t in 0..SLOTS {
                    acc += (u[t] - s2[t]).norm_sqr();
                }
                *d = acc;
                d_min = d_min.min(acc);
            }
            // ln sum exp((|n|^2 - d) / N0), factored around the largest term
            let tail: f64 = dist.iter().map(|d| (-(d - d_min) / n0).exp()).sum();
            let lse = (norm_sq(&noise) - d_min) / n0 + tail.ln();
            total += lse / LN_2;
        }
    }
    Ok((k as f64).log2() - total / (k * noise_samples) as f64)
}

/// Inputs of one ergodic secrecy rate evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsrParams {
    pub alpha: f64,
    pub p_tot: f64,
    pub sigma_sq_bob: f64,
    pub sigma_sq_eve: f64,
    pub n0: f64,
    pub channel_draws: usize,
    pub noise_samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyEstimate {
    /// Bob's ergodic rate, bits per channel use.
    pub r_b: f64,
    pub r_b_se: f64,
    /// Eve's ergodic rate, bits per channel use.
    pub r_e: f64,
    pub r_e_se: f64,
    /// `max(0, r_b - r_e)`.
    pub r_s: f64,
    /// Standard error of the paired per-draw difference.
    pub r_s_se: f64,
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// Ergodic rates of Bob and Eve over `channel_draws` independent channel
/// pairs. `set` may use any symbol energy; signals are rescaled to the
/// transmitted per-symbol energy `alpha P / 8`.
///
/// Draws run on the current rayon pool and are reduced in draw order, so
/// the result depends only on `streams`.
pub fn ergodic_secrecy_rate(params: &EsrParams, set: &CodewordSet, streams: &Streams) -> Result<SecrecyEstimate> {
    if params.channel_draws == 0 {
        return Err(Error::Config("channel_draws must be >= 1".into()));
    }
    let n = set.antennas();
    let gain = (params.alpha * params.p_tot / 8.0 / set.symbol_energy()).sqrt();
    let hat_b = noise_variance_bob(params.sigma_sq_bob, params.alpha, params.p_tot, params.n0);
    let hat_e = noise_variance_eve(params.sigma_sq_eve, params.alpha, params.p_tot, params.n0);
    let per_draw: Vec<(f64, f64)> = (0..params.channel_draws as u64)
        .into_par_iter()
        .map(|d| -> Result<(f64, f64)> {
            let hb = draw_channel(n, params.sigma_sq_bob, &mut streams.rng(Purpose::ChannelBob, d))?;
            let ge = draw_channel(n, params.sigma_sq_eve, &mut streams.rng(Purpose::ChannelEve, d))?;
            let hb_eff: Vec<_> = effective_channel(&hb.h_est, params.sigma_sq_bob, hat_b, params.n0)?
                .into_iter()
                .map(|z| z * gain)
                .collect();
            let ge_eff: Vec<_> = effective_channel(&ge.h_est, params.sigma_sq_eve, hat_e, params.n0)?
                .into_iter()
                .map(|z| z * gain)
                .collect();
            let ib = mutual_information(
                &hb_eff,
                set,
                params.n0,
                params.noise_samples,
                &mut streams.rng(Purpose::Mi, 2 * d),
            )?;
            let ie = mutual_information(
                &ge_eff,
                set,
                params.n0,
                params.noise_samples,
                &mut streams.rng(Purpose::Mi, 2 * d + 1),
            )?;
            Ok((ib / SLOTS as f64, ie / SLOTS as f64))
        })
        .collect::<Result<Vec<_>>>()?;
    let rb: Vec<f64> = per_draw.iter().map(|p| p.0).collect();
    let re: Vec<f64> = per_draw.iter().map(|p| p.1).collect();
    let diff: Vec<f64> = per_draw.iter().map(|p| p.0 - p.1).collect();
    let (r_b, r_b_se) = mean_se(&rb);
    let (r_e, r_e_se) = mean_se(&re);
    let (gap, r_s_se) = mean_se(&diff);
    Ok(SecrecyEstimate { r_b, r_b_se, r_e, r_e_se, r_s: gap.max(0.0), r_s_se })
}
