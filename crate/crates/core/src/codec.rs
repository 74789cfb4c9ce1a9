//! Index-modulated CIOD encoding.
//!
//! A block carries `log2(N) - 1` combination bits followed by four
//! `log2(M)`-bit symbol labels. Combination `i` activates antennas
//! `(2i+1, 2i+2)` in slots 1-2 and `(N-2i-1, N-2i)` in slots 3-4 (1-indexed),
//! each pair transmitting an Alamouti block of coordinate-interleaved
//! symbols.

use crate::constellation::Constellation;
use crate::matrix::BlockMatrix;
use crate::{is_power_of_two, log2_exact, Complex64, Error, Result, SLOTS};

/// Active antenna pairs of one combination, 1-indexed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AntennaPairs {
    pub first: (usize, usize),
    pub second: (usize, usize),
}

impl AntennaPairs {
    /// Zero-based rows of the first pair.
    pub fn first_rows(&self) -> (usize, usize) {
        (self.first.0 - 1, self.first.1 - 1)
    }

    /// Zero-based rows of the second pair.
    pub fn second_rows(&self) -> (usize, usize) {
        (self.second.0 - 1, self.second.1 - 1)
    }
}

pub(crate) fn check_antennas(n: usize) -> Result<()> {
    if n < 4 || !is_power_of_two(n) {
        return Err(Error::InvalidAntennaCount(n));
    }
    Ok(())
}

/// Number of antenna combinations, `N/2`.
pub fn combination_count(n: usize) -> usize {
    n / 2
}

pub fn antenna_pairs(index: usize, n: usize) -> Result<AntennaPairs> {
    check_antennas(n)?;
    if index >= n / 2 {
        return Err(Error::ComboOutOfRange { index, n });
    }
    Ok(AntennaPairs { first: (2 * index + 1, 2 * index + 2), second: (n - 2 * index - 1, n - 2 * index) })
}

/// Swaps quadratures: `x~_k = Re(x_k) + j Im(x_a)` with `a = 3, 4, 1, 2`.
pub fn interleave(x: [Complex64; 4]) -> [Complex64; 4] {
    const PARTNER: [usize; 4] = [2, 3, 0, 1];
    std::array::from_fn(|k| Complex64::new(x[k].re, x[PARTNER[k]].im))
}

/// Alamouti block `[[a, -b*], [b, a*]]`.
fn place_alamouti(m: &mut BlockMatrix, rows: (usize, usize), col: usize, a: Complex64, b: Complex64) {
    m.set(rows.0, col, a);
    m.set(rows.1, col, b);
    m.set(rows.0, col + 1, -b.conj());
    m.set(rows.1, col + 1, a.conj());
}

/// Codeword for combination `index` carrying the four given symbols.
pub fn codeword(symbols: [Complex64; 4], index: usize, n: usize) -> Result<BlockMatrix> {
    let pairs = antenna_pairs(index, n)?;
    let xt = interleave(symbols);
    let mut s = BlockMatrix::zeros(n);
    place_alamouti(&mut s, pairs.first_rows(), 0, xt[0], xt[1]);
    place_alamouti(&mut s, pairs.second_rows(), 2, xt[2], xt[3]);
    Ok(s)
}

/// Bits per block, `4 log2(M) + log2(N) - 1`.
pub fn bits_per_block(n: usize, m: usize) -> usize {
    4 * log2_exact(m) + log2_exact(n) - 1
}

pub fn spectral_efficiency(n: usize, m: usize) -> Result<f64> {
    check_antennas(n)?;
    if m < 2 || !is_power_of_two(m) {
        return Err(Error::InvalidOrder { kind: "M-ary", m });
    }
    Ok(bits_per_block(n, m) as f64 / SLOTS as f64)
}

/// One transmitted CIOD-IM block.
#[derive(Debug, Clone, PartialEq)]
pub struct TxBlock {
    pub codeword: BlockMatrix,
    pub combo_index: usize,
    pub symbol_indices: [usize; 4],
    pub symbols: [Complex64; 4],
    pub bits: Vec<bool>,
}

fn bits_to_uint(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

fn push_uint(out: &mut Vec<bool>, value: usize, width: usize) {
    for k in (0..width).rev() {
        out.push((value >> k) & 1 == 1);
    }
}

/// Bit label of a block: combination index (natural binary, MSB first)
/// followed by the four symbol labels.
pub fn block_bits(combo: usize, symbol_indices: [usize; 4], c: &Constellation, n: usize) -> Vec<bool> {
    let bps = c.bits_per_symbol();
    let mut bits = Vec::with_capacity(bits_per_block(n, c.order()));
    push_uint(&mut bits, combo, log2_exact(n) - 1);
    for &s in &symbol_indices {
        push_uint(&mut bits, c.label(s), bps);
    }
    bits
}

/// Splits a bit vector into (combination index, symbol indices).
pub fn parse_bits(bits: &[bool], c: &Constellation, n: usize) -> Result<(usize, [usize; 4])> {
    check_antennas(n)?;
    let expected = bits_per_block(n, c.order());
    if bits.len() != expected {
        return Err(Error::BitLength { expected, got: bits.len() });
    }
    let idx_bits = log2_exact(n) - 1;
    let bps = c.bits_per_symbol();
    let combo = bits_to_uint(&bits[..idx_bits]);
    let syms = std::array::from_fn(|k| {
        let start = idx_bits + k * bps;
        c.index_of_label(bits_to_uint(&bits[start..start + bps]))
    });
    Ok((combo, syms))
}

/// Encodes from already-split indices.
pub fn encode_indices(combo: usize, symbol_indices: [usize; 4], c: &Constellation, n: usize) -> Result<TxBlock> {
    let symbols = symbol_indices.map(|s| c.point(s));
    Ok(TxBlock {
        codeword: codeword(symbols, combo, n)?,
        combo_index: combo,
        symbol_indices,
        symbols,
        bits: block_bits(combo, symbol_indices, c, n),
    })
}

pub fn encode(bits: &[bool], c: &Constellation, n: usize) -> Result<TxBlock> {
    let (combo, syms) = parse_bits(bits, c, n)?;
    encode_indices(combo, syms, c, n)
}

/// Nonzero entry of a dispersion matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tap {
    pub row: usize,
    pub col: usize,
    pub weight: Complex64,
}

/// The eight weight matrices `A_1..A_8` of one combination, ordered as
/// `(Re x1, Im x1, Re x2, Im x2, ...)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionSet {
    pub combo_index: usize,
    pub matrices: Vec<BlockMatrix>,
}

impl DispersionSet {
    /// Linear combination `sum_u A_u r_u` for real coordinates `r`.
    pub fn synthesize(&self, coords: &[f64; 8]) -> BlockMatrix {
        let n = self.matrices[0].rows();
        let mut out = BlockMatrix::zeros(n);
        for (a, &r) in self.matrices.iter().zip(coords) {
            for row in 0..n {
                for col in 0..SLOTS {
                    let v = out.get(row, col) + a.get(row, col) * r;
                    out.set(row, col, v);
                }
            }
        }
        out
    }

    /// Sparse view of each matrix.
    pub fn taps(&self) -> Vec<Vec<Tap>> {
        self.matrices
            .iter()
            .map(|a| {
                let mut t = Vec::new();
                for row in 0..a.rows() {
                    for col in 0..SLOTS {
                        let w = a.get(row, col);
                        if w.norm_sqr() > 0.0 {
                            t.push(Tap { row, col, weight: w });
                        }
                    }
                }
                t
            })
            .collect()
    }
}

/// Weight matrices obtained by exciting one real symbol coordinate at a
/// time in the codeword layout (the layout is real-linear).
pub fn dispersion_matrices(index: usize, n: usize) -> Result<DispersionSet> {
    antenna_pairs(index, n)?;
    let matrices = (0..8)
        .map(|u| {
            let mut x = [Complex64::new(0.0, 0.0); 4];
            x[u / 2] = if u % 2 == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 1.0) };
            codeword(x, index, n)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DispersionSet { combo_index: index, matrices })
}
