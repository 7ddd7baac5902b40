//! X-shaped three-qubit matrices.
//!
//! `X(a, b, c)` carries `a` on the top half of the diagonal, `b` on the bottom
//! half in reverse order (`b₁` at `111`), and `c` on the upper anti-diagonal.

mod norm;
mod separability;

pub use norm::{
    block_positivity, is_block_positive_xwitness, x_norm, x_norm_lower_bound_check, BlockPositivity, LowerBoundCheck,
};
pub use separability::{
    rank4_separability_check, reconstruct_product_vector, xpart_decompose, Reconstruction, SeparabilityReport,
    Violation,
};

use serde::{Deserialize, Serialize};

use crate::qcore::{eigh, ComplexMatrix, C64};
use crate::{Error, Result};

const GHZ_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "XMatrixJson", try_from = "XMatrixJson")]
pub struct XMatrix {
    pub a: [f64; 4],
    pub b: [f64; 4],
    pub c: [C64; 4],
}

impl XMatrix {
    pub fn new(a: [f64; 4], b: [f64; 4], c: [C64; 4]) -> Self {
        XMatrix { a, b, c }
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(8);
        for k in 0..4 {
            m[(k, k)] = C64::new(self.a[k], 0.0);
            m[(7 - k, 7 - k)] = C64::new(self.b[k], 0.0);
            m[(k, 7 - k)] = self.c[k];
            m[(7 - k, k)] = self.c[k].conj();
        }
        m
    }

    pub fn scale(&self, k: f64) -> Self {
        XMatrix {
            a: self.a.map(|x| x * k),
            b: self.b.map(|x| x * k),
            c: self.c.map(|z| z * k),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.c.iter().all(|z| *z == C64::default())
    }

    /// The 2×2 block `[[a_k, c_k], [conj(c_k), b_k]]` on indices `k, 7 - k`.
    pub fn block(&self, k: usize) -> [[C64; 2]; 2] {
        [
            [C64::new(self.a[k], 0.0), self.c[k]],
            [self.c[k].conj(), C64::new(self.b[k], 0.0)],
        ]
    }

    /// Numerical rank: eigenvalues with magnitude above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        eigh(&self.to_matrix())
            .expect("X-matrices are Hermitian")
            .values
            .iter()
            .filter(|v| v.abs() > tol)
            .count()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..4 {
            worst = worst
                .max((self.a[k] - other.a[k]).abs())
                .max((self.b[k] - other.b[k]).abs())
                .max((self.c[k] - other.c[k]).norm());
        }
        worst
    }
}

/// `X(a, b, c)` is GHZ-diagonal iff `a = b` and `c` is real.
pub fn is_ghz_diagonal(x: &XMatrix) -> bool {
    let same_diag = x.a.iter().zip(&x.b).all(|(p, q)| (p - q).abs() <= GHZ_TOL);
    same_diag && x.c.iter().all(|z| z.im.abs() < GHZ_TOL)
}

/// On-disk form: `{"a": [..], "b": [..], "c_re": [..], "c_im": [..]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct XMatrixJson {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c_re: Vec<f64>,
    pub c_im: Vec<f64>,
}

impl From<XMatrix> for XMatrixJson {
    fn from(x: XMatrix) -> Self {
        XMatrixJson {
            a: x.a.to_vec(),
            b: x.b.to_vec(),
            c_re: x.c.iter().map(|z| z.re).collect(),
            c_im: x.c.iter().map(|z| z.im).collect(),
        }
    }
}

impl TryFrom<XMatrixJson> for XMatrix {
    type Error = Error;

    fn try_from(j: XMatrixJson) -> Result<Self> {
        let four = |name: &str, v: &[f64]| -> Result<[f64; 4]> {
            <[f64; 4]>::try_from(v)
                .map_err(|_| Error::Malformed(format!("`{name}` must have 4 entries, got {}", v.len())))
        };
        let a = four("a", &j.a)?;
        let b = four("b", &j.b)?;
        let re = four("c_re", &j.c_re)?;
        let im = four("c_im", &j.c_im)?;
        Ok(XMatrix::new(a, b, std::array::from_fn(|k| C64::new(re[k], im[k]))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::xpart;

    fn cx(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn to_matrix_is_hermitian_and_round_trips() {
        let x = XMatrix::new(
            [1.0, 2.0, 3.0, 4.0],
            [5.0, 6.0, 7.0, 8.0],
            [cx(0.1, 0.2), cx(-0.3, 0.0), cx(0.0, 1.0), cx(2.0, -2.0)],
        );
        let m = x.to_matrix();
        assert_eq!(m.max_asymmetry(), 0.0);
        assert_eq!(m[(0, 0)], cx(1.0, 0.0));
        assert_eq!(m[(7, 7)], cx(5.0, 0.0));
        assert_eq!(m[(4, 4)], cx(8.0, 0.0));
        assert_eq!(m[(2, 5)], cx(0.0, 1.0));
        assert_eq!(xpart(&m).unwrap(), x);
    }

    #[test]
    fn rank_matches_block_ranks() {
        // blocks: rank 2, rank 1, rank 0, rank 1
        let x = XMatrix::new(
            [2.0, 1.0, 0.0, 4.0],
            [1.0, 1.0, 0.0, 0.0],
            [cx(0.5, 0.0), cx(0.0, 1.0), cx(0.0, 0.0), cx(0.0, 0.0)],
        );
        let block_ranks: usize = (0..4)
            .map(|k| {
                let b = x.block(k);
                let (p, q, r) = (b[0][0].re, b[1][1].re, b[0][1].norm_sqr());
                let det = p * q - r;
                if det.abs() > 1e-12 {
                    2
                } else if p.abs() + q.abs() > 1e-12 {
                    1
                } else {
                    0
                }
            })
            .sum();
        assert_eq!(block_ranks, 4);
        assert_eq!(x.rank(1e-10), block_ranks);
    }

    #[test]
    fn ghz_diagonal_examples() {
        let ones = [1.0; 4];
        let zero = cx(0.0, 0.0);
        assert!(is_ghz_diagonal(&XMatrix::new(
            ones,
            ones,
            [cx(1.0, 0.0), zero, zero, zero]
        )));
        assert!(!is_ghz_diagonal(&XMatrix::new(
            ones,
            ones,
            [cx(0.0, 1.0), zero, zero, zero]
        )));
        assert!(is_ghz_diagonal(&xpart(&ComplexMatrix::identity(8)).unwrap()));
    }

    #[test]
    fn json_shape() {
        let s = r#"{"a":[1,1,1,1],"b":[1,1,1,1],"c_re":[1,0,0,0],"c_im":[0,0,0,0.5]}"#;
        let x: XMatrix = serde_json::from_str(s).unwrap();
        assert_eq!(x.c[3], cx(0.0, 0.5));
        assert!(
            serde_json::from_str::<XMatrix>(r#"{"a":[1],"b":[1,1,1,1],"c_re":[0,0,0,0],"c_im":[0,0,0,0]}"#).is_err()
        );
    }
}
