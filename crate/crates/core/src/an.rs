//! Artificial-noise matrices that cancel on the legitimate channel.
//!
//! For combination `i`, the noise matrix `Z_i` occupies the same rows as the
//! codeword. Each half is `Q(z1, z2) = [[z1, z1], [z2, z2]]` with
//! `z_lt = beta_lt * v`; the coefficients are chosen from Bob's channel
//! estimate so that `[h_a h_b] * [beta_1; beta_2] = 0`.

use crate::codec::antenna_pairs;
use crate::matrix::BlockMatrix;
use crate::{Complex64, Error, Result};

/// Expected Frobenius power of `Z_i` for unit-variance channel entries and `v`.
pub const AN_POWER: f64 = 8.0;

/// Which of the two sign conventions to use for each coefficient pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignOption {
    /// `beta_1 = -h_b, beta_2 = h_a`.
    #[default]
    First,
    /// `beta_1 = h_b, beta_2 = -h_a`.
    Second,
}

impl std::str::FromStr for SignOption {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "first" | "1" => Ok(SignOption::First),
            "second" | "2" => Ok(SignOption::Second),
            other => Err(Error::Config(format!("unknown AN sign option `{other}`"))),
        }
    }
}

/// `(beta_11, beta_21, beta_12, beta_22)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnCoefficients {
    pub b11: Complex64,
    pub b21: Complex64,
    pub b12: Complex64,
    pub b22: Complex64,
}

pub fn an_coefficients(h_est: &[Complex64], index: usize, n: usize) -> Result<AnCoefficients> {
    an_coefficients_with(h_est, index, n, SignOption::First)
}

pub fn an_coefficients_with(h_est: &[Complex64], index: usize, n: usize, sign: SignOption) -> Result<AnCoefficients> {
    let pairs = antenna_pairs(index, n)?;
    if h_est.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: h_est.len() });
    }
    let (f0, f1) = pairs.first_rows();
    let (s0, s1) = pairs.second_rows();
    let s = match sign {
        SignOption::First => 1.0,
        SignOption::Second => -1.0,
    };
    Ok(AnCoefficients { b11: -h_est[f1] * s, b21: h_est[f0] * s, b12: -h_est[s1] * s, b22: h_est[s0] * s })
}

/// One realization of the artificial-noise matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AnBlock {
    pub an_matrix: BlockMatrix,
    pub coefficients: AnCoefficients,
    pub jam_scalar: Complex64,
    pub combo_index: usize,
}

pub fn build_an(coefficients: AnCoefficients, v: Complex64, index: usize, n: usize) -> Result<AnBlock> {
    let pairs = antenna_pairs(index, n)?;
    let mut z = BlockMatrix::zeros(n);
    let (f0, f1) = pairs.first_rows();
    let (s0, s1) = pairs.second_rows();
    for col in 0..2 {
        z.set(f0, col, coefficients.b11 * v);
        z.set(f1, col, coefficients.b21 * v);
        z.set(s0, col + 2, coefficients.b12 * v);
        z.set(s1, col + 2, coefficients.b22 * v);
    }
    Ok(AnBlock { an_matrix: z, coefficients, jam_scalar: v, combo_index: index })
}

/// Scale applied to `Z_i` so that its expected power is `(1 - alpha) P_tot`.
pub fn an_scale(alpha: f64, p_tot: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidAlpha(alpha));
    }
    Ok(((1.0 - alpha) * p_tot / AN_POWER).sqrt())
}

/// `Z_i^N = sqrt((1 - alpha) P_tot / P_Z) Z_i`; the normalization is by the
/// expected power, not the realized one.
pub fn normalize_an(an: &AnBlock, alpha: f64, p_tot: f64) -> Result<BlockMatrix> {
    Ok(an.an_matrix.scale(an_scale(alpha, p_tot)?))
}
