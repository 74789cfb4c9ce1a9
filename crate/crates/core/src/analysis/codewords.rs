//! Exhaustive enumeration of the CIOD-IM codebook.

use crate::codec::{check_antennas, encode_indices};
use crate::constellation::Constellation;
use crate::matrix::BlockMatrix;
use crate::{log2_exact, Error, Result};

/// Default limit on `(N/2) M^4`.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// All `(N/2) M^4` codewords. Member `r` is the codeword whose block bit
/// label, read MSB first, is the integer `r`; the Hamming distance between
/// members `r` and `s` is therefore `popcount(r ^ s)`.
#[derive(Debug, Clone)]
pub struct CodewordSet {
    members: Vec<BlockMatrix>,
    n: usize,
    m: usize,
    symbol_energy: f64,
}

/// `(N/2) M^4` without overflow for any sane input.
pub fn codebook_size(n: usize, m: usize) -> u64 {
    (n as u64 / 2).saturating_mul((m as u64).saturating_pow(4))
}

pub fn enumerate_codewords(n: usize, c: &Constellation, cap: u64) -> Result<CodewordSet> {
    check_antennas(n)?;
    let m = c.order();
    let size = codebook_size(n, m);
    if size > cap {
        return Err(Error::EnumerationCap { size, cap });
    }
    let bps = c.bits_per_symbol();
    let mask = m - 1;
    let members = (0..size as usize)
        .map(|r| {
            let combo = r >> (4 * bps);
            let syms = std::array::from_fn(|k| c.index_of_label((r >> ((3 - k) * bps)) & mask));
            encode_indices(combo, syms, c, n).map(|tx| tx.codeword)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CodewordSet { members, n, m, symbol_energy: c.energy() })
}

impl CodewordSet {
    pub fn members(&self) -> &[BlockMatrix] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn antennas(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.m
    }

    /// Average symbol energy of the constellation the set was built from.
    pub fn symbol_energy(&self) -> f64 {
        self.symbol_energy
    }

    /// `log2 |set|`, the entropy of a block.
    pub fn bits_per_block(&self) -> usize {
        log2_exact(self.members.len())
    }

    /// Uniform prior probability of a member.
    pub fn prior(&self) -> f64 {
        1.0 / self.members.len() as f64
    }

    pub fn hamming(&self, a: usize, b: usize) -> u32 {
        ((a ^ b) as u64).count_ones()
    }
}
