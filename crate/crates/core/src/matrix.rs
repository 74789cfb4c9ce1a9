//! Dense `N x 4` complex block matrices (antennas by time slots).

use crate::{Complex64, SlotVector, SLOTS};
use std::ops::{Add, Sub};

/// An `N x 4` complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    rows: usize,
    data: Vec<Complex64>,
}

impl BlockMatrix {
    pub fn zeros(rows: usize) -> Self {
        Self { rows, data: vec![Complex64::new(0.0, 0.0); rows * SLOTS] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * SLOTS + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * SLOTS + col] = v;
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.data[row * SLOTS..(row + 1) * SLOTS]
    }

    /// Row vector times matrix: `h * self`.
    pub fn premultiply(&self, h: &[Complex64]) -> SlotVector {
        assert_eq!(h.len(), self.rows, "row vector length must equal matrix rows");
        let mut out = [Complex64::new(0.0, 0.0); SLOTS];
        for (r, hr) in h.iter().enumerate() {
            let row = self.row(r);
            if row.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
                continue;
            }
            for (o, z) in out.iter_mut().zip(row) {
                *o += hr * z;
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { rows: self.rows, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Indices of rows carrying at least one nonzero entry.
    pub fn nonzero_rows(&self) -> Vec<usize> {
        (0..self.rows).filter(|&r| self.row(r).iter().any(|z| z.norm_sqr() > 0.0)).collect()
    }

    /// `self^H * self`, a 4x4 Hermitian matrix.
    pub fn gram(&self) -> [[Complex64; SLOTS]; SLOTS] {
        let mut g = [[Complex64::new(0.0, 0.0); SLOTS]; SLOTS];
        for r in 0..self.rows {
            let row = self.row(r);
            for a in 0..SLOTS {
                if row[a].norm_sqr() == 0.0 {
                    continue;
                }
                for b in 0..SLOTS {
                    g[a][b] += row[a].conj() * row[b];
                }
            }
        }
        g
    }
}

impl Add for &BlockMatrix {
    type Output = BlockMatrix;
    fn add(self, rhs: &BlockMatrix) -> BlockMatrix {
        assert_eq!(self.rows, rhs.rows);
        BlockMatrix { rows: self.rows, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &BlockMatrix {
    type Output = BlockMatrix;
    fn sub(self, rhs: &BlockMatrix) -> BlockMatrix {
        assert_eq!(self.rows, rhs.rows);
        BlockMatrix { rows: self.rows, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

/// Squared Euclidean norm of a slot vector.
#[inline]
pub fn norm_sq(v: &SlotVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn premultiply_matches_manual_product() {
        let mut m = BlockMatrix::zeros(2);
        m.set(0, 0, c(1.0, 0.0));
        m.set(1, 0, c(0.0, 1.0));
        m.set(1, 3, c(2.0, -1.0));
        let y = m.premultiply(&[c(1.0, 1.0), c(3.0, 0.0)]);
        assert_eq!(y[0], c(1.0, 1.0) + c(0.0, 3.0));
        assert_eq!(y[1], c(0.0, 0.0));
        assert_eq!(y[3], c(6.0, -3.0));
    }

    #[test]
    fn gram_trace_is_frobenius_norm() {
        let mut m = BlockMatrix::zeros(4);
        m.set(0, 1, c(1.0, 2.0));
        m.set(3, 2, c(-0.5, 0.25));
        m.set(2, 2, c(0.3, 0.0));
        let g = m.gram();
        let tr: f64 = (0..SLOTS).map(|k| g[k][k].re).sum();
        assert!((tr - m.frobenius_norm_sq()).abs() < 1e-15);
        assert_eq!(m.nonzero_rows(), vec![0, 2, 3]);
    }
}
