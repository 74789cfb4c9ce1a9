//! Colored-noise variances, scalar whitening and two-stage detection.
//!
//! Both receivers see `y = sqrt(1 - s2) h_est S + n_hat`, where `n_hat`
//! collects estimation-error leakage, residual (Bob) or full (Eve)
//! artificial noise, and thermal noise. After scaling by
//! `sqrt(N0 / N_hat)` the effective noise has variance `N0` and the
//! detector works on `y~ = h~ S + n~`.

use crate::an::AN_POWER;
use crate::codec::{block_bits, check_antennas, dispersion_matrices, Tap};
use crate::constellation::Constellation;
use crate::{Complex64, Error, Result, SlotVector, SLOTS};

/// Per-slot power of the codeword through a unit-variance channel:
/// two active antennas, each at `alpha P / 8`.
fn codeword_slot_power(alpha: f64, p_tot: f64) -> f64 {
    2.0 * alpha * p_tot / 8.0
}

/// Per-slot power of `Z^N` through a unit-variance channel: two active
/// entries of unit expected power scaled by `(1 - alpha) P / P_Z`.
fn an_slot_power(alpha: f64, p_tot: f64) -> f64 {
    2.0 * (1.0 - alpha) * p_tot / AN_POWER
}

/// Average per-slot variance of Bob's colored noise:
/// `s2 alpha P/4 + s2 (1-alpha) P/4 + N0`.
pub fn noise_variance_bob(sigma_sq: f64, alpha: f64, p_tot: f64, n0: f64) -> f64 {
    sigma_sq * codeword_slot_power(alpha, p_tot) + sigma_sq * an_slot_power(alpha, p_tot) + n0
}

/// Average per-slot variance of Eve's colored noise; on top of Bob's terms
/// Eve keeps the AN seen through her estimated channel,
/// `(1-s2)(1-alpha) P/4`.
pub fn noise_variance_eve(sigma_sq: f64, alpha: f64, p_tot: f64, n0: f64) -> f64 {
    (1.0 - sigma_sq) * an_slot_power(alpha, p_tot) + noise_variance_bob(sigma_sq, alpha, p_tot, n0)
}

/// Whitening gain `Psi = sqrt(N0 / N_hat)`.
pub fn whitening_gain(hat_n: f64, n0: f64) -> Result<f64> {
    if !(hat_n > 0.0) {
        return Err(Error::NonPositiveVariance(hat_n));
    }
    if !(n0 > 0.0) {
        return Err(Error::NonPositiveVariance(n0));
    }
    Ok((n0 / hat_n).sqrt())
}

pub fn whiten(y: &SlotVector, hat_n: f64, n0: f64) -> Result<SlotVector> {
    let g = whitening_gain(hat_n, n0)?;
    Ok(y.map(|z| z * g))
}

/// Effective channel `h~ = Psi sqrt(1 - s2) h_est` matching [`whiten`].
pub fn effective_channel(h_est: &[Complex64], sigma_sq: f64, hat_n: f64, n0: f64) -> Result<Vec<Complex64>> {
    let g = whitening_gain(hat_n, n0)? * (1.0 - sigma_sq).sqrt();
    Ok(h_est.iter().map(|h| h * g).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    pub combo_hat: usize,
    pub symbol_indices_hat: [usize; 4],
    pub symbols_hat: [Complex64; 4],
    pub bits_hat: Vec<bool>,
    /// `sum_k eps^{i,k}` of the chosen combination.
    pub metric: f64,
}

/// Two-stage symbol-by-symbol detector with cached dispersion taps.
#[derive(Debug, Clone)]
pub struct Detector {
    constellation: Constellation,
    n: usize,
    /// `taps[i][u]`: nonzero entries of `A_{u+1, i}`.
    taps: Vec<Vec<Vec<Tap>>>,
}

impl Detector {
    pub fn new(constellation: Constellation, n: usize) -> Result<Self> {
        check_antennas(n)?;
        let taps = (0..n / 2).map(|i| dispersion_matrices(i, n).map(|d| d.taps())).collect::<Result<Vec<_>>>()?;
        Ok(Self { constellation, n, taps })
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    pub fn antennas(&self) -> usize {
        self.n
    }

    /// `h * A_{u,i}` for all eight weight matrices.
    fn projected_weights(&self, h: &[Complex64], combo: usize) -> [SlotVector; 8] {
        let zero = Complex64::new(0.0, 0.0);
        let mut w = [[zero; SLOTS]; 8];
        for (wu, taps) in w.iter_mut().zip(&self.taps[combo]) {
            for t in taps {
                wu[t.col] += h[t.row] * t.weight;
            }
        }
        w
    }

    /// Stage 1 picks the combination minimizing the sum over the four
    /// symbols of their best single-symbol metric; stage 2 keeps that
    /// combination's per-symbol minimizers. Ties resolve to the lowest
    /// index.
    pub fn detect(&self, y: &SlotVector, h: &[Complex64]) -> Result<DetectionResult> {
        if h.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: h.len() });
        }
        let points = self.constellation.points();
        let mut best_combo = 0;
        let mut best_sum = f64::INFINITY;
        let mut best_syms = [0usize; 4];
        for combo in 0..self.n / 2 {
            let w = self.projected_weights(h, combo);
            let mut sum = 0.0;
            let mut syms = [0usize; 4];
            for k in 0..4 {
                let (wr, wi) = (&w[2 * k], &w[2 * k + 1]);
                let mut eps = f64::INFINITY;
                for (zeta, x) in points.iter().enumerate() {
                    let mut m = 0.0;
                    for t in 0..SLOTS {
                        m += (y[t] - wr[t] * x.re - wi[t] * x.im).norm_sqr();
                    }
                    if m < eps {
                        eps = m;
                        syms[k] = zeta;
                    }
                }
                sum += eps;
            }
            if sum < best_sum {
                best_sum = sum;
                best_combo = combo;
                best_syms = syms;
            }
        }
        Ok(DetectionResult {
            combo_hat: best_combo,
            symbol_indices_hat: best_syms,
            symbols_hat: best_syms.map(|s| points[s]),
            bits_hat: block_bits(best_combo, best_syms, &self.constellation, self.n),
            metric: best_sum,
        })
    }
}

/// One-shot detection; builds a [`Detector`] on every call.
pub fn detect(y: &SlotVector, h: &[Complex64], c: &Constellation, n: usize) -> Result<DetectionResult> {
    Detector::new(c.clone(), n)?.detect(y, h)
}
