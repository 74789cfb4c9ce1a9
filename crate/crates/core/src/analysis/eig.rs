//! Eigenvalues of small Hermitian matrices.

use crate::Complex64;

/// Eigenvalues (ascending) of a 4x4 Hermitian matrix.
///
/// The matrix `A + jB` is embedded as the real symmetric `[[A, -B], [B, A]]`,
/// whose spectrum is that of the Hermitian matrix with every eigenvalue
/// doubled; cyclic Jacobi rotations diagonalize it.
pub fn hermitian_eigenvalues(m: &[[Complex64; 4]; 4]) -> [f64; 4] {
    let mut a = [[0.0f64; 8]; 8];
    for r in 0..4 {
        for c in 0..4 {
            let z = m[r][c];
            a[r][c] = z.re;
            a[r + 4][c + 4] = z.re;
            a[r + 4][c] = z.im;
            a[r][c + 4] = -z.im;
        }
    }
    let mut ev = symmetric_eigenvalues(a);
    ev.sort_by(|x, y| x.total_cmp(y));
    [ev[0], ev[2], ev[4], ev[6]]
}

fn symmetric_eigenvalues<const N: usize>(mut a: [[f64; N]; N]) -> [f64; N] {
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return [0.0; N];
    }
    for _sweep in 0..64 {
        let off: f64 = (0..N)
            .flat_map(|p| (0..N).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..N - 1 {
            for q in p + 1..N {
                let apq = a[p][q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::array::from_fn(|k| a[k][k])
}

/// Numerical rank: eigenvalues above `rel_tol * max(eigenvalue)`.
pub fn numerical_rank(eigs: &[f64], rel_tol: f64) -> usize {
    let max = eigs.iter().cloned().fold(0.0, f64::max);
    if max <= 0.0 {
        return 0;
    }
    eigs.iter().filter(|&&l| l > rel_tol * max).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::complex_gaussian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// det(m) by cofactor expansion.
    fn det4(m: &[[Complex64; 4]; 4]) -> Complex64 {
        fn det(m: Vec<Vec<Complex64>>) -> Complex64 {
            if m.len() == 1 {
                return m[0][0];
            }
            let mut acc = c(0.0, 0.0);
            for j in 0..m.len() {
                let minor: Vec<Vec<Complex64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, z)| *z).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc += m[0][j] * det(minor) * sign;
            }
            acc
        }
        det(m.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn diagonal_matrix() {
        let mut m = [[c(0.0, 0.0); 4]; 4];
        for (k, v) in [3.0, -1.0, 0.5, 2.0].iter().enumerate() {
            m[k][k] = c(*v, 0.0);
        }
        assert_eq!(hermitian_eigenvalues(&m), [-1.0, 0.5, 2.0, 3.0]);
    }

    #[test]
    fn characteristic_polynomial_matches_determinant() {
        // prod (1 + s lambda) == det(I + s M) for random Gram matrices
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let b: [[Complex64; 4]; 4] =
                std::array::from_fn(|_| std::array::from_fn(|_| complex_gaussian(&mut rng, 1.0)));
            let mut g = [[c(0.0, 0.0); 4]; 4];
            for r in 0..4 {
                for cc in 0..4 {
                    for k in 0..4 {
                        g[r][cc] += b[k][r].conj() * b[k][cc];
                    }
                }
            }
            let ev = hermitian_eigenvalues(&g);
            assert!(ev[0] >= -1e-12);
            for s in [0.1, 1.0, 7.0] {
                let mut i_plus = g;
                for r in 0..4 {
                    for cc in 0..4 {
                        i_plus[r][cc] *= s;
                    }
                    i_plus[r][r] += 1.0;
                }
                let d = det4(&i_plus);
                let p: f64 = ev.iter().map(|l| 1.0 + s * l).product();
                assert!((d.re - p).abs() < 1e-9 * p && d.im.abs() < 1e-9 * p);
            }
        }
    }

    #[test]
    fn rank_counts() {
        assert_eq!(numerical_rank(&[0.0, 1e-14, 2.0, 3.0], 1e-9), 2);
        assert_eq!(numerical_rank(&[0.0; 4], 1e-9), 0);
    }
}
