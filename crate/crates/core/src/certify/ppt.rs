use rayon::prelude::*;
use serde::Serialize;

use crate::qcore::{herm_min_eig, partial_transpose, ComplexMatrix, SubsetMask};
use crate::{Error, Result};

pub const PPT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PptReport {
    pub is_ppt: bool,
    /// Smallest eigenvalue of `ρ^{T(S)}`, indexed by the mask bits of `S`.
    pub min_eigs: [f64; 8],
}

impl PptReport {
    pub fn min(&self) -> f64 {
        self.min_eigs.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Smallest eigenvalue of every partial transpose of `rho`.
///
/// `ρ^{T(Sᶜ)} = (ρ^{T(S)})ᵗ` has the same spectrum, so only the four subsets
/// without party 1 are diagonalized.
pub fn ppt_check(rho: &ComplexMatrix) -> Result<PptReport> {
    if rho.dim() != 8 {
        return Err(Error::InvalidDimension(rho.dim()));
    }
    rho.ensure_hermitian()?;
    let half: Vec<f64> = [0u8, 2, 4, 6]
        .par_iter()
        .map(|&bits| herm_min_eig(&partial_transpose(rho, SubsetMask::from_bits(bits).unwrap())?))
        .collect::<Result<_>>()?;
    let mut min_eigs = [0.0; 8];
    for (k, &bits) in [0usize, 2, 4, 6].iter().enumerate() {
        min_eigs[bits] = half[k];
        min_eigs[bits ^ 0b111] = half[k];
    }
    Ok(PptReport {
        is_ppt: min_eigs.iter().all(|&e| e >= -PPT_TOL),
        min_eigs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{ProductVector, C64};

    #[test]
    fn maximally_mixed() {
        let r = ppt_check(&ComplexMatrix::identity(8).scale(0.125)).unwrap();
        assert!(r.is_ppt);
        assert!(r.min_eigs.iter().all(|&e| (e - 0.125).abs() < 1e-14));
    }

    #[test]
    fn product_state() {
        assert!(ppt_check(&ProductVector::basis(0, 0, 0).projector()).unwrap().is_ppt);
    }

    #[test]
    fn ghz_is_not_ppt() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = [C64::new(0.0, 0.0); 8];
        v[0] = C64::new(h, 0.0);
        v[7] = C64::new(h, 0.0);
        let r = ppt_check(&ComplexMatrix::outer(&v)).unwrap();
        assert!(!r.is_ppt);
        assert!(r.min_eigs[0].abs() < 1e-12 && r.min_eigs[7].abs() < 1e-12);
        for bits in 1..7 {
            assert!((r.min_eigs[bits] + 0.5).abs() < 1e-12, "{bits}: {}", r.min_eigs[bits]);
        }
    }

    #[test]
    fn mirrored_values_match_direct_computation() {
        let v: Vec<C64> = (0..8).map(|k| C64::new(k as f64 - 3.0, (k * k) as f64 * 0.1)).collect();
        let rho = &ComplexMatrix::outer(&v) + &ComplexMatrix::identity(8);
        let r = ppt_check(&rho).unwrap();
        for s in SubsetMask::all() {
            let direct = herm_min_eig(&partial_transpose(&rho, s).unwrap()).unwrap();
            assert!((direct - r.min_eigs[s.bits() as usize]).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(8);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(ppt_check(&m).is_err());
    }
}
