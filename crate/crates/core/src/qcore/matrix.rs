use std::ops::{Add, Index, IndexMut, Mul, Sub};

use serde::{Deserialize, Serialize};

use super::{c, SubsetMask, C64};
use crate::xstate::XMatrix;
use crate::{Error, Result};

/// Max entry deviation tolerated by Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense square complex matrix of dimension 2, 4 or 8, stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "MatrixJson", try_from = "MatrixJson")]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 | 8 => Ok(()),
        _ => Err(Error::InvalidDimension(dim)),
    }
}

impl ComplexMatrix {
    /// Zero matrix. Panics unless `dim` is 2, 4 or 8.
    pub fn zeros(dim: usize) -> Self {
        check_dim(dim).expect("matrix dimension");
        ComplexMatrix {
            dim,
            data: vec![C64::default(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        check_dim(dim)?;
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Malformed("matrix is not square".into()));
        }
        Ok(ComplexMatrix {
            dim,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|&x| c(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = c(x, 0.0);
        }
        m
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, k: f64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * k).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|M[i][j] - conj(M[j][i])|`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.max_asymmetry() <= HERMITIAN_TOL
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        let max_asymmetry = self.max_asymmetry();
        if max_asymmetry > HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_asymmetry });
        }
        Ok(())
    }

    /// `v† M v`.
    pub fn quad_form(&self, v: &[C64]) -> C64 {
        assert_eq!(v.len(), self.dim);
        let mut acc = C64::default();
        for i in 0..self.dim {
            let mut row = C64::default();
            for j in 0..self.dim {
                row += self[(i, j)] * v[j];
            }
            acc += v[i].conj() * row;
        }
        acc
    }

    /// `Σ_ij A_ij B_ij`, i.e. `Tr(A Bᵗ)`.
    pub fn entrywise_dot(&self, other: &Self) -> C64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    /// Partial transpose over the index bits in `bits`.
    ///
    /// Entry `(i, j)` of the result is the entry of `self` with the selected
    /// bits of `i` and `j` exchanged.
    pub fn transpose_index_bits(&self, bits: usize) -> Self {
        Self::from_fn(self.dim, |i, j| {
            let si = (i & !bits) | (j & bits);
            let sj = (j & !bits) | (i & bits);
            self[(si, sj)]
        })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        ComplexMatrix::from_fn(n, |i, j| (0..n).map(|k| self[(i, k)] * rhs[(k, j)]).sum())
    }
}

/// Kronecker product `A ⊗ B` in the lexicographic basis.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (m, n) = (a.dim, b.dim);
    if m * n > 8 {
        return Err(Error::DimensionOverflow { left: m, right: n });
    }
    Ok(ComplexMatrix::from_fn(m * n, |i, j| {
        a[(i / n, j / n)] * b[(i % n, j % n)]
    }))
}

/// `M^{T(S)}` for a three-qubit matrix.
pub fn partial_transpose(m: &ComplexMatrix, subset: SubsetMask) -> Result<ComplexMatrix> {
    if m.dim != 8 {
        return Err(Error::InvalidDimension(m.dim));
    }
    Ok(m.transpose_index_bits(subset.index_bits()))
}

/// Diagonal and anti-diagonal of a three-qubit matrix as `X(a, b, c)`.
///
/// `a` is read from indices 0..4, `b` from indices 7, 6, 5, 4 and
/// `c_k = M[k][7 - k]`; every other entry is dropped.
pub fn xpart(m: &ComplexMatrix) -> Result<XMatrix> {
    if m.dim != 8 {
        return Err(Error::InvalidDimension(m.dim));
    }
    for i in 0..8 {
        let imag = m[(i, i)].im;
        if imag.abs() > HERMITIAN_TOL {
            return Err(Error::ComplexDiagonal { index: i, imag });
        }
    }
    let mut a = [0.0; 4];
    let mut b = [0.0; 4];
    let mut cs = [C64::default(); 4];
    for k in 0..4 {
        a[k] = m[(k, k)].re;
        b[k] = m[(7 - k, 7 - k)].re;
        cs[k] = m[(k, 7 - k)];
    }
    Ok(XMatrix::new(a, b, cs))
}

/// On-disk form: `{"dim": n, "re": [[..]], "im": [[..]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        let rows = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..m.dim)
                .map(|i| (0..m.dim).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        MatrixJson {
            dim: m.dim,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        check_dim(j.dim)?;
        let square = |rows: &Vec<Vec<f64>>| rows.len() == j.dim && rows.iter().all(|r| r.len() == j.dim);
        if !square(&j.re) || !square(&j.im) {
            return Err(Error::Malformed(format!("re/im arrays must both be {0}x{0}", j.dim)));
        }
        Ok(ComplexMatrix::from_fn(j.dim, |r, col| c(j.re[r][col], j.im[r][col])))
    }
}
