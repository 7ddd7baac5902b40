//! Construction and numerical certification of the three-qubit witness
//! family `φ_{s,t}`: a positive bilinear map `M₂ × M₂ → M₂` whose Choi
//! matrix is X-shaped, indecomposable and exposed.
//!
//! The crate is split into four layers:
//!
//! - [`qcore`]: fixed-size complex linear algebra on `C², C⁴, C⁸`
//!   (Kronecker products, partial transposes, Hermitian eigenvalues).
//! - [`xstate`]: X-shaped three-qubit matrices, the X-norm and the
//!   rank-four separability machinery.
//! - [`witness`]: the map itself, its Choi matrix, the kernel product
//!   vectors and see-saw positivity checks.
//! - [`certify`]: spanning, exposedness and PPT-entanglement detection
//!   certificates.

pub mod certify;
pub mod error;
pub mod qcore;
pub mod witness;
pub mod xstate;

pub use error::{Error, Result};
pub use qcore::{ComplexMatrix, ProductVector, SubsetMask, C64};
pub use witness::{KernelFamily, KernelMember, WitnessFamily};
pub use xstate::XMatrix;
