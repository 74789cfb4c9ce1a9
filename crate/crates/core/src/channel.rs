//! Imperfect-CSI Rayleigh block fading.
//!
//! The realized channel is `h = sqrt(1 - s2) h_est + sqrt(s2) h_err` with
//! `h_est`, `h_err` i.i.d. CN(0, 1); the channel is constant over the four
//! slots of a block.

use crate::matrix::BlockMatrix;
use crate::{Complex64, Error, Result, SlotVector, SLOTS};
use rand::Rng;
use rand_distr::StandardNormal;

/// Draws a circularly-symmetric complex Gaussian with the given variance.
#[inline]
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelState {
    pub h_true: Vec<Complex64>,
    pub h_est: Vec<Complex64>,
    pub h_err: Vec<Complex64>,
    pub sigma_sq: f64,
}

pub(crate) fn check_error_power(sigma_sq: f64) -> Result<()> {
    if !(0.0..1.0).contains(&sigma_sq) {
        return Err(Error::InvalidErrorPower(sigma_sq));
    }
    Ok(())
}

impl ChannelState {
    /// Composes a state from given estimate and error vectors.
    pub fn compose(h_est: Vec<Complex64>, h_err: Vec<Complex64>, sigma_sq: f64) -> Result<Self> {
        check_error_power(sigma_sq)?;
        if h_est.len() != h_err.len() {
            return Err(Error::DimensionMismatch { expected: h_est.len(), got: h_err.len() });
        }
        let (a, b) = ((1.0 - sigma_sq).sqrt(), sigma_sq.sqrt());
        let h_true = h_est.iter().zip(&h_err).map(|(e, r)| e * a + r * b).collect();
        Ok(Self { h_true, h_est, h_err, sigma_sq })
    }

    pub fn antennas(&self) -> usize {
        self.h_true.len()
    }
}

pub fn draw_channel<R: Rng + ?Sized>(n: usize, sigma_sq: f64, rng: &mut R) -> Result<ChannelState> {
    check_error_power(sigma_sq)?;
    let h_est = (0..n).map(|_| complex_gaussian(rng, 1.0)).collect();
    let h_err = (0..n).map(|_| complex_gaussian(rng, 1.0)).collect();
    ChannelState::compose(h_est, h_err, sigma_sq)
}

/// Noiseless part of the received row vector, `h (S + Z^N)`.
pub fn propagate(codeword: &BlockMatrix, an_normalized: &BlockMatrix, ch: &ChannelState) -> Result<SlotVector> {
    let n = ch.antennas();
    for m in [codeword, an_normalized] {
        if m.rows() != n {
            return Err(Error::DimensionMismatch { expected: n, got: m.rows() });
        }
    }
    let s = codeword.premultiply(&ch.h_true);
    let z = an_normalized.premultiply(&ch.h_true);
    Ok(std::array::from_fn(|t| s[t] + z[t]))
}

/// `h (S + Z^N) + n` with i.i.d. CN(0, N0) noise.
pub fn transmit<R: Rng + ?Sized>(
    codeword: &BlockMatrix,
    an_normalized: &BlockMatrix,
    ch: &ChannelState,
    n0: f64,
    rng: &mut R,
) -> Result<SlotVector> {
    if !(n0 > 0.0) {
        return Err(Error::NonPositiveVariance(n0));
    }
    let clean = propagate(codeword, an_normalized, ch)?;
    let mut y = clean;
    for y_t in y.iter_mut().take(SLOTS) {
        *y_t += complex_gaussian(rng, n0);
    }
    Ok(y)
}
