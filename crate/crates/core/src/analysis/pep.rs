//! Pairwise error probability and the union bound on BER (perfect CSI).
//!
//! Codewords handed to [`pep`] are in the unit normalization
//! `E||X||_F^2 = 1` (symbol energy 1/8); the transmitted codeword is
//! `sqrt(alpha P) X`. Conditioned on `h`, the PEP is
//! `Q(sqrt(gamma_s ||h Phi||^2))` with `gamma_s = alpha P / (2 N0)`;
//! averaging over `h ~ CN(0, I)` with the MGF of `h Delta h^H` and Craig's
//! form of `Q` gives
//! `(1/pi) int_0^{pi/2} prod_d (1 + gamma_s lambda_d / (2 sin^2 t))^{-1} dt`.

use super::codewords::CodewordSet;
use super::eig::{hermitian_eigenvalues, numerical_rank};
use super::quadrature::GaussLegendre;
use crate::codec::encode_indices;
use crate::constellation::Constellation;
use crate::matrix::BlockMatrix;
use crate::{Error, Result};
use rand::Rng;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

/// Quadrature nodes used for the PEP integral.
pub const PEP_NODES: usize = 64;

/// Relative tolerance for the numerical rank of `Delta`.
pub const RANK_TOL: f64 = 1e-9;

struct CraigNodes {
    /// `(1 / (2 sin^2 t), w / pi)` per node.
    nodes: Vec<(f64, f64)>,
}

fn craig_nodes(count: usize) -> CraigNodes {
    let nodes = GaussLegendre::new(count)
        .on_interval(0.0, FRAC_PI_2)
        .into_iter()
        .map(|(t, w)| (1.0 / (2.0 * t.sin().powi(2)), w / PI))
        .collect();
    CraigNodes { nodes }
}

fn default_nodes() -> &'static CraigNodes {
    static NODES: OnceLock<CraigNodes> = OnceLock::new();
    NODES.get_or_init(|| craig_nodes(PEP_NODES))
}

fn integrate(nodes: &CraigNodes, eigs: &[f64], gamma_s: f64) -> f64 {
    nodes
        .nodes
        .iter()
        .map(|&(inv, w)| {
            let s = gamma_s * inv;
            w / eigs.iter().map(|l| 1.0 + s * l.max(0.0)).product::<f64>()
        })
        .sum()
}

/// PEP for a pair whose difference Gram matrix has eigenvalues `eigs`.
pub fn pep_from_eigenvalues(eigs: &[f64], gamma_s: f64) -> f64 {
    integrate(default_nodes(), eigs, gamma_s)
}

/// Same integral with an arbitrary node count (for convergence checks).
pub fn pep_with_nodes(eigs: &[f64], gamma_s: f64, nodes: usize) -> f64 {
    integrate(&craig_nodes(nodes), eigs, gamma_s)
}

/// `gamma_s = alpha P_tot / (2 N0)`.
pub fn gamma_s(alpha: f64, p_tot: f64, n0: f64) -> f64 {
    alpha * p_tot / (2.0 * n0)
}

/// Eigenvalues of `(X_n - X_u)^H (X_n - X_u)`.
pub fn difference_eigenvalues(x_n: &BlockMatrix, x_u: &BlockMatrix) -> [f64; 4] {
    hermitian_eigenvalues(&(x_n - x_u).gram())
}

/// Unconditional PEP `P(X_n -> X_u)` for unit-normalized codewords.
pub fn pep(x_n: &BlockMatrix, x_u: &BlockMatrix, alpha: f64, p_tot: f64, n0: f64) -> Result<f64> {
    if (x_n - x_u).frobenius_norm_sq() == 0.0 {
        return Err(Error::IdenticalCodewords);
    }
    if !(n0 > 0.0) {
        return Err(Error::NonPositiveVariance(n0));
    }
    Ok(pep_from_eigenvalues(&difference_eigenvalues(x_n, x_u), gamma_s(alpha, p_tot, n0)))
}

/// Precomputed pair spectra for evaluating the exact union bound over an
/// SNR grid.
#[derive(Debug, Clone)]
pub struct UnionBound {
    /// `(hamming weight, eigenvalues)` per unordered pair, eigenvalues in
    /// the unit normalization.
    pairs: Vec<(u32, [f64; 4])>,
    size: usize,
    log2_size: f64,
}

impl UnionBound {
    pub fn new(set: &CodewordSet) -> Self {
        // rescale to symbol energy 1/8
        let norm = 1.0 / (8.0 * set.symbol_energy());
        let members = set.members();
        let mut pairs = Vec::with_capacity(members.len() * (members.len() - 1) / 2);
        for a in 0..members.len() {
            for b in a + 1..members.len() {
                let ev = difference_eigenvalues(&members[a], &members[b]).map(|l| l * norm);
                pairs.push((set.hamming(a, b), ev));
            }
        }
        Self { pairs, size: members.len(), log2_size: (members.len() as f64).log2() }
    }

    /// Number of ordered pairs summed over.
    pub fn ordered_pairs(&self) -> usize {
        2 * self.pairs.len()
    }

    /// Unclipped right-hand side of the bound.
    pub fn evaluate_raw(&self, alpha: f64, p_tot: f64, n0: f64) -> f64 {
        let g = gamma_s(alpha, p_tot, n0);
        let nodes = default_nodes();
        // each unordered pair stands for both directions
        let sum: f64 = self.pairs.iter().map(|(e, ev)| *e as f64 * integrate(nodes, ev, g)).sum();
        2.0 * sum / (self.size as f64 * self.log2_size)
    }

    /// Bound clipped to `[0, 0.5]` for reporting.
    pub fn evaluate(&self, alpha: f64, p_tot: f64, n0: f64) -> f64 {
        self.evaluate_raw(alpha, p_tot, n0).clamp(0.0, 0.5)
    }
}

/// Exact union bound, clipped to `[0, 0.5]`.
pub fn union_bound(set: &CodewordSet, alpha: f64, p_tot: f64, n0: f64) -> f64 {
    UnionBound::new(set).evaluate(alpha, p_tot, n0)
}

/// Monte Carlo union bound from uniformly sampled ordered pairs, for
/// codebooks too large to enumerate. Returns `(estimate, standard error)`
/// per entry of `n0s`, unclipped.
pub fn sampled_union_bound<R: Rng + ?Sized>(
    n: usize,
    c: &Constellation,
    alpha: f64,
    p_tot: f64,
    n0s: &[f64],
    samples: usize,
    rng: &mut R,
) -> Result<Vec<(f64, f64)>> {
    let m = c.order();
    let bps = c.bits_per_symbol();
    let size = super::codewords::codebook_size(n, m);
    let norm = 1.0 / (8.0 * c.energy());
    let log2_size = (size as f64).log2();
    let draw = |rng: &mut R| -> (usize, [usize; 4]) {
        (rng.random_range(0..n / 2), std::array::from_fn(|_| rng.random_range(0..m)))
    };
    let label = |combo: usize, syms: &[usize; 4]| -> u64 {
        syms.iter().fold(combo as u64, |acc, &s| (acc << bps) | c.label(s) as u64)
    };
    let mut acc = vec![(0.0, 0.0); n0s.len()];
    let mut kept = 0usize;
    while kept < samples {
        let (ca, sa) = draw(rng);
        let (cb, sb) = draw(rng);
        let (la, lb) = (label(ca, &sa), label(cb, &sb));
        if la == lb {
            continue;
        }
        kept += 1;
        let xa = encode_indices(ca, sa, c, n)?.codeword;
        let xb = encode_indices(cb, sb, c, n)?.codeword;
        let ev = difference_eigenvalues(&xa, &xb).map(|l| l * norm);
        let e = (la ^ lb).count_ones() as f64;
        for (slot, &n0) in acc.iter_mut().zip(n0s) {
            let term = e * pep_from_eigenvalues(&ev, gamma_s(alpha, p_tot, n0));
            slot.0 += term;
            slot.1 += term * term;
        }
    }
    let k = samples as f64;
    let factor = (size as f64 - 1.0) / log2_size;
    Ok(acc
        .into_iter()
        .map(|(s, s2)| {
            let mean = s / k;
            let var = (s2 / k - mean * mean).max(0.0);
            (factor * mean, factor * (var / k).sqrt())
        })
        .collect())
}

/// Minimum rank of `Delta` over all distinct pairs, and a pair achieving it.
pub fn diversity_rank_scan(set: &CodewordSet) -> (usize, (usize, usize)) {
    let members = set.members();
    let mut best = (usize::MAX, (0, 0));
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            let r = numerical_rank(&difference_eigenvalues(&members[a], &members[b]), RANK_TOL);
            if r < best.0 {
                best = (r, (a, b));
            }
        }
    }
    best
}
