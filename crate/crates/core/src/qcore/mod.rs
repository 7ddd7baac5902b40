//! Dense complex linear algebra for one, two and three qubits.
//!
//! All matrices use the lexicographic basis `000, 001, …, 111`, with party 1
//! carried by the most significant index bit.

mod eigen;
mod matrix;
mod product;
mod subset;

pub use eigen::{eigh, herm_min_eig, is_psd, HermitianEigen, PSD_TOL};
pub use matrix::{kron, partial_transpose, xpart, ComplexMatrix, MatrixJson, HERMITIAN_TOL};
pub use product::{partial_conjugate, ProductVector, ProductVectorJson};
pub use subset::SubsetMask;

pub type C64 = num_complex::Complex64;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
