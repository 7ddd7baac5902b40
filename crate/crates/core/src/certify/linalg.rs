use nalgebra::DMatrix;
use std::f64::consts::SQRT_2;

use crate::qcore::{ComplexMatrix, C64};

/// Coordinates of a Hermitian 8×8 matrix in an orthonormal basis of the
/// 64-dimensional real space, so that `herm_to_vec(A)·herm_to_vec(B) = Tr(AB)`.
///
/// Layout: the 8 diagonal entries, then `√2 Re Aᵢⱼ`, `√2 Im Aᵢⱼ` for `i < j`
/// in row-major order.
pub fn herm_to_vec(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut out = Vec::with_capacity(n * n);
    out.extend((0..n).map(|i| m[(i, i)].re));
    for i in 0..n {
        for j in i + 1..n {
            out.push(SQRT_2 * m[(i, j)].re);
            out.push(SQRT_2 * m[(i, j)].im);
        }
    }
    out
}

pub fn herm_from_vec(v: &[f64]) -> ComplexMatrix {
    let n = (v.len() as f64).sqrt().round() as usize;
    assert_eq!(n * n, v.len(), "not a square coordinate vector");
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = C64::new(v[i], 0.0);
    }
    let mut k = n;
    for i in 0..n {
        for j in i + 1..n {
            let z = C64::new(v[k], v[k + 1]) / SQRT_2;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            k += 2;
        }
    }
    m
}

/// Orthonormal bases (columns) of the kernel and row space of a real matrix.
#[derive(Clone, Debug)]
pub struct Nullspace {
    pub basis: DMatrix<f64>,
    pub row_space: DMatrix<f64>,
    pub rank: usize,
    /// Smallest singular value kept in the row space, relative to the largest;
    /// `1` when the matrix is zero.
    pub min_kept: f64,
    /// Largest singular value treated as zero, relative to the largest.
    pub max_dropped: f64,
}

impl Nullspace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

/// Kernel of `a` with singular values below `tol` times the largest treated as zero.
pub fn nullspace(a: &DMatrix<f64>, tol: f64) -> Nullspace {
    let n = a.ncols();
    // pad to at least n rows so the SVD returns a full set of right singular vectors
    let padded = if a.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.rows_mut(0, a.nrows()).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let sigma = svd.singular_values;
    let largest = sigma.iter().cloned().fold(0.0, f64::max);
    if largest == 0.0 {
        return Nullspace {
            basis: DMatrix::identity(n, n),
            row_space: DMatrix::zeros(n, 0),
            rank: 0,
            min_kept: 1.0,
            max_dropped: 0.0,
        };
    }
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    let (mut min_kept, mut max_dropped) = (f64::INFINITY, 0.0f64);
    for (k, &s) in sigma.iter().enumerate() {
        let rel = s / largest;
        if rel >= tol {
            kept.push(k);
            min_kept = min_kept.min(rel);
        } else {
            dropped.push(k);
            max_dropped = max_dropped.max(rel);
        }
    }
    let mut basis = DMatrix::zeros(n, dropped.len());
    for (col, &k) in dropped.iter().enumerate() {
        basis.set_column(col, &v_t.row(k).transpose());
    }
    let mut row_space = DMatrix::zeros(n, kept.len());
    for (col, &k) in kept.iter().enumerate() {
        row_space.set_column(col, &v_t.row(k).transpose());
    }
    Nullspace {
        basis,
        row_space,
        rank: kept.len(),
        min_kept,
        max_dropped,
    }
}

/// Stack coordinate rows into a matrix.
pub(crate) fn rows_matrix(rows: &[Vec<f64>], ncols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_herm(rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let m = ComplexMatrix::from_fn(8, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        (&m + &m.adjoint()).scale(0.5)
    }

    #[test]
    fn vectorization_is_an_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let (a, b) = (random_herm(&mut rng), random_herm(&mut rng));
            let (va, vb) = (herm_to_vec(&a), herm_to_vec(&b));
            let dot: f64 = va.iter().zip(&vb).map(|(x, y)| x * y).sum();
            assert!((dot - (&a * &b).trace().re).abs() < 1e-12);
            assert!(herm_from_vec(&va).max_abs_diff(&a) < 1e-15);
        }
    }

    #[test]
    fn nullspace_of_rank_deficient_matrix() {
        // rows span {e0 + e1, e2}; kernel is spanned by e0 - e1 and e3
        let a = DMatrix::from_row_slice(3, 4, &[1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 2.0, 2.0, 3.0, 0.0]);
        let ns = nullspace(&a, 1e-10);
        assert_eq!(ns.rank, 2);
        assert_eq!(ns.dim(), 2);
        assert!((&a * &ns.basis).amax() < 1e-14);
        let gram = ns.basis.transpose() * &ns.basis;
        assert!((gram - DMatrix::<f64>::identity(2, 2)).amax() < 1e-14);
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        let ns = nullspace(&DMatrix::zeros(2, 5), 1e-8);
        assert_eq!((ns.rank, ns.dim()), (0, 5));
    }
}
