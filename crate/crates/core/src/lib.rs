//! Link-level simulation and analysis of index-modulated coordinate
//! interleaved orthogonal designs (CIOD-IM) with artificial-noise secrecy.
//!
//! The transmitter (Alice) maps bits onto an `N x 4` CIOD codeword whose
//! active antenna pair is selected by index bits, and superimposes an
//! artificial-noise matrix built from its estimate of the legitimate
//! channel so that the noise cancels at Bob. Eve, observing through an
//! independent channel, sees the noise in full.
//!
//! Modules follow the processing chain:
//!
//! - [`constellation`]: rotated, Gray-labelled M-ary symbol sets.
//! - [`codec`]: bits to codeword, dispersion matrices, spectral efficiency.
//! - [`an`]: artificial-noise coefficients and matrices.
//! - [`channel`]: imperfect-CSI Rayleigh channels and the received signal.
//! - [`receiver`]: colored-noise variances, whitening, two-stage detection.
//! - [`analysis`]: PEP, union bound, mutual information and secrecy rate.
//! - [`harness`]: configuration, reproducible random streams, sweeps, CSV.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too; index loops
// read more naturally than iterators in the small-matrix kernels.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod an;
pub mod analysis;
pub mod channel;
pub mod codec;
pub mod constellation;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod receiver;
pub mod streams;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Number of time slots spanned by one CIOD codeword.
pub const SLOTS: usize = 4;

/// Row vector of received samples over the four slots.
pub type SlotVector = [Complex64; SLOTS];

pub(crate) fn is_power_of_two(x: usize) -> bool {
    x != 0 && x & (x - 1) == 0
}

pub(crate) fn log2_exact(x: usize) -> usize {
    x.trailing_zeros() as usize
}
