//! The bilinear map `φ_{s,t}: M₂ × M₂ → M₂` and the objects built from it.

mod kernel;
mod motivating;
mod seesaw;

pub use kernel::{all_families, kernel_members, kernel_vector, FamilyParams, Grid, KernelFamily, KernelMember};
pub use motivating::{affine_residual, motivating_linear, motivating_sum, p_alpha, MotivatingSum};
pub use seesaw::{
    seesaw_all, seesaw_from, seesaw_min, verify_positive, PositivityReport, SeeSawResult, DEFAULT_RESTARTS,
};

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::qcore::{c, ComplexMatrix, C64};
use crate::xstate::XMatrix;
use crate::{Error, Result};

const ST_TOL: f64 = 1e-9;
const PAIRING_IMAG_TOL: f64 = 1e-10;

/// `ω = e^{iπ/4}`.
pub fn omega(k: i32) -> C64 {
    C64::from_polar(1.0, FRAC_PI_4 * k as f64)
}

/// Parameters `(s, t)` of the witness, with `st = 8`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessFamily {
    s: f64,
    t: f64,
}

impl WitnessFamily {
    pub fn new(s: f64, t: f64) -> Result<Self> {
        let valid = s.is_finite() && t.is_finite() && s > 0.0 && t > 0.0 && (s * t - 8.0).abs() < ST_TOL;
        if !valid {
            return Err(Error::InvalidWitness { s, t });
        }
        Ok(WitnessFamily { s, t })
    }

    /// `s = t = 2√2`.
    pub fn symmetric() -> Self {
        WitnessFamily {
            s: 2.0 * SQRT_2,
            t: 2.0 * SQRT_2,
        }
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `u = √(s/t)`.
    pub fn u(&self) -> f64 {
        (self.s / self.t).sqrt()
    }

    pub fn apply(&self, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        phi_apply(self, x, y)
    }

    pub fn choi(&self) -> ComplexMatrix {
        choi_explicit(self)
    }

    /// The X-part of the Choi matrix: `X((0,0,0,t), (0,0,0,s), (1,1,−1,1))`.
    pub fn choi_xpart(&self) -> XMatrix {
        XMatrix::new(
            [0.0, 0.0, 0.0, self.t],
            [0.0, 0.0, 0.0, self.s],
            [c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)],
        )
    }
}

impl Default for WitnessFamily {
    fn default() -> Self {
        Self::symmetric()
    }
}

/// `φ(x, y)` for 2×2 inputs.
pub fn phi_apply(w: &WitnessFamily, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    for m in [x, y] {
        if m.dim() != 2 {
            return Err(Error::InvalidDimension(m.dim()));
        }
    }
    let (x11, x12, x21, x22) = (x[(0, 0)], x[(0, 1)], x[(1, 0)], x[(1, 1)]);
    let (y11, y12, y21, y22) = (y[(0, 0)], y[(0, 1)], y[(1, 0)], y[(1, 1)]);
    let rows = vec![
        vec![x22 * y11 * w.s, x12 * y12 - x12 * y21 + x21 * y12 + x21 * y21],
        vec![x12 * y12 + x12 * y21 - x21 * y12 + x21 * y21, x11 * y22 * w.t],
    ];
    ComplexMatrix::from_rows(&rows)
}

fn matrix_unit(i: usize, j: usize) -> ComplexMatrix {
    let mut e = ComplexMatrix::zeros(2);
    e[(i, j)] = c(1.0, 0.0);
    e
}

/// `C_f = Σ |i₁⟩⟨j₁| ⊗ |i₂⟩⟨j₂| ⊗ f(|i₁⟩⟨j₁|, |i₂⟩⟨j₂|)` for a bilinear
/// `f: M₂ × M₂ → M₂`.
pub fn choi_generic<F>(f: F) -> ComplexMatrix
where
    F: Fn(&ComplexMatrix, &ComplexMatrix) -> ComplexMatrix,
{
    let mut out = ComplexMatrix::zeros(8);
    for i1 in 0..2 {
        for j1 in 0..2 {
            for i2 in 0..2 {
                for j2 in 0..2 {
                    let block = f(&matrix_unit(i1, j1), &matrix_unit(i2, j2));
                    for k in 0..2 {
                        for l in 0..2 {
                            out[(4 * i1 + 2 * i2 + k, 4 * j1 + 2 * j2 + l)] += block[(k, l)];
                        }
                    }
                }
            }
        }
    }
    out
}

/// The Choi matrix of `φ_{s,t}`, written out entry by entry.
pub fn choi_explicit(w: &WitnessFamily) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(8);
    m[(0, 7)] = c(1.0, 0.0);
    m[(7, 0)] = c(1.0, 0.0);
    m[(1, 6)] = c(1.0, 0.0);
    m[(6, 1)] = c(1.0, 0.0);
    m[(2, 5)] = c(-1.0, 0.0);
    m[(5, 2)] = c(-1.0, 0.0);
    m[(3, 3)] = c(w.t, 0.0);
    m[(3, 4)] = c(1.0, 0.0);
    m[(4, 3)] = c(1.0, 0.0);
    m[(4, 4)] = c(w.s, 0.0);
    m
}

/// `⟨ρ, C⟩ = Tr(C ρᵗ) = Σ_ij C_ij ρ_ij`.
pub fn pairing(rho: &ComplexMatrix, choi: &ComplexMatrix) -> Result<f64> {
    rho.ensure_hermitian()?;
    choi.ensure_hermitian()?;
    let v = choi.entrywise_dot(rho);
    if v.im.abs() > PAIRING_IMAG_TOL {
        return Err(Error::ImaginaryResidue(v.im));
    }
    Ok(v.re)
}

/// `⟨C_φ, X(a,b,c)⟩ = t a₄ + s b₄ + 2 Re(c₁ + c₂ − c₃ + c₄)`.
pub fn pairing_x(rho: &XMatrix, w: &WitnessFamily) -> f64 {
    let cc = rho.c;
    w.t * rho.a[3] + w.s * rho.b[3] + 2.0 * (cc[0] + cc[1] - cc[2] + cc[3]).re
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DualKind {
    /// `c = (ω⁻³, ω³, ω⁻¹, ω⁻³)`.
    First,
    /// `c = (ω³, ω⁻³, ω, ω³)`.
    Second,
}

/// The rank-four separable states `ρ₁(a₁,a₂)`, `ρ₂(a₁,a₂)` in the dual face.
pub fn dual_state(w: &WitnessFamily, kind: DualKind, a1: f64, a2: f64) -> Result<XMatrix> {
    if a1.is_nan() || a1 <= 0.0 {
        return Err(Error::NonPositive { name: "a1", value: a1 });
    }
    if a2.is_nan() || a2 <= 0.0 {
        return Err(Error::NonPositive { name: "a2", value: a2 });
    }
    let u = w.u();
    let a = [a1, a2, u * a1 / a2, u];
    let b = [1.0 / a1, 1.0 / a2, a2 / (u * a1), 1.0 / u];
    let cs = match kind {
        DualKind::First => [omega(-3), omega(3), omega(-1), omega(-3)],
        DualKind::Second => [omega(3), omega(-3), omega(1), omega(3)],
    };
    Ok(XMatrix::new(a, b, cs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{herm_min_eig, is_psd, xpart, ProductVector};
    use crate::xstate::rank4_separability_check;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn families() -> Vec<WitnessFamily> {
        [(2.0 * SQRT_2, 2.0 * SQRT_2), (4.0, 2.0), (2.0, 4.0), (8.0, 1.0)]
            .iter()
            .map(|&(s, t)| WitnessFamily::new(s, t).unwrap())
            .collect()
    }

    #[test]
    fn parameter_validation() {
        assert!(WitnessFamily::new(4.0, 2.0).is_ok());
        assert!(WitnessFamily::new(2.8284271247, 2.8284271247).is_ok());
        assert!(WitnessFamily::new(1.0, 1.0).is_err());
        assert!(WitnessFamily::new(-4.0, -2.0).is_err());
    }

    #[test]
    fn phi_apply_examples() {
        for w in families() {
            let p0 = ComplexMatrix::diag(&[1.0, 0.0]);
            assert_eq!(phi_apply(&w, &p0, &p0).unwrap(), ComplexMatrix::zeros(2));

            let ones = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
            let expected = ComplexMatrix::from_real_rows(&[&[w.s(), 2.0], &[2.0, w.t()]]).unwrap();
            let got = phi_apply(&w, &ones, &ones).unwrap();
            assert_eq!(got, expected);
            assert!(is_psd(&got).unwrap());

            let id = ComplexMatrix::identity(2);
            assert_eq!(phi_apply(&w, &id, &id).unwrap(), ComplexMatrix::diag(&[w.s(), w.t()]));
        }
    }

    #[test]
    fn choi_generic_matches_explicit() {
        for w in families() {
            let generic = choi_generic(|x, y| phi_apply(&w, x, y).unwrap());
            assert_eq!(generic.max_abs_diff(&choi_explicit(&w)), 0.0);
        }
    }

    #[test]
    fn choi_generic_simple_maps() {
        assert_eq!(choi_generic(|_, _| ComplexMatrix::zeros(2)), ComplexMatrix::zeros(8));
        let m = choi_generic(|x, y| ComplexMatrix::identity(2).scale((x[(0, 0)] * y[(0, 0)]).re));
        assert_eq!(m, ComplexMatrix::diag(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn explicit_choi_entries_and_spectrum() {
        for w in families() {
            let m = choi_explicit(&w);
            assert_eq!(m[(3, 3)], c(w.t(), 0.0));
            assert_eq!(m[(4, 4)], c(w.s(), 0.0));
            assert_eq!(m[(2, 5)], c(-1.0, 0.0));
            assert!(m.is_hermitian());
            // anti-diagonal blocks [[0, ±1], [±1, 0]] have eigenvalues ±1
            assert!((herm_min_eig(&m).unwrap() + 1.0).abs() < 1e-10);
            assert_eq!(xpart(&m).unwrap(), w.choi_xpart());
        }
    }

    #[test]
    fn pairing_examples() {
        let w = WitnessFamily::symmetric();
        let choi = w.choi();
        let p000 = ProductVector::basis(0, 0, 0).projector();
        assert_eq!(pairing(&p000, &choi).unwrap(), 0.0);
        let mixed = ComplexMatrix::identity(8).scale(1.0 / 8.0);
        assert!((pairing(&mixed, &choi).unwrap() - (w.s() + w.t()) / 8.0).abs() < 1e-15);
        let rho1 = dual_state(&w, DualKind::First, 1.0, 1.0).unwrap();
        assert!(pairing(&rho1.to_matrix(), &choi).unwrap().abs() < 1e-12);
    }

    #[test]
    fn pairing_rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(8);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(pairing(&m, &WitnessFamily::symmetric().choi()).is_err());
    }

    #[test]
    fn pairing_x_examples() {
        let w = WitnessFamily::new(4.0, 2.0).unwrap();
        let z = [C64::default(); 4];
        let d = XMatrix::new([0.0, 0.0, 0.0, 1.0], [0.0; 4], z);
        assert_eq!(pairing_x(&d, &w), w.t());
        let e = XMatrix::new([0.0; 4], [0.0; 4], [c(1.0, 0.0), z[0], z[0], z[0]]);
        assert_eq!(pairing_x(&e, &w), 2.0);
        for kind in [DualKind::First, DualKind::Second] {
            let r = dual_state(&w, kind, 1.0, 1.0).unwrap();
            assert!(pairing_x(&r, &w).abs() < 1e-12);
        }
    }

    #[test]
    fn pairing_x_matches_trace_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let w = WitnessFamily::new(2.0, 4.0).unwrap();
        let choi = w.choi();
        for _ in 0..1000 {
            let mut f = || rng.random_range(-2.0..2.0);
            let x = XMatrix::new(
                [f(), f(), f(), f()],
                [f(), f(), f(), f()],
                [c(f(), f()), c(f(), f()), c(f(), f()), c(f(), f())],
            );
            assert!((pairing_x(&x, &w) - pairing(&x.to_matrix(), &choi).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn dual_state_examples() {
        let w = WitnessFamily::new(8.0, 1.0).unwrap();
        let u = w.u();
        let r1 = dual_state(&w, DualKind::First, 1.0, 1.0).unwrap();
        assert_eq!(r1.a, [1.0, 1.0, u, u]);
        assert_eq!(r1.b, [1.0, 1.0, 1.0 / u, 1.0 / u]);
        assert_eq!(r1.c, [omega(-3), omega(3), omega(-1), omega(-3)]);
        let r2 = dual_state(&w, DualKind::Second, 1.0, 1.0).unwrap();
        assert_eq!(r2.c, [omega(3), omega(-3), omega(1), omega(3)]);

        let r = dual_state(&w, DualKind::Second, 2.0, 0.5).unwrap();
        assert!(rank4_separability_check(&r).unwrap().separable);
        assert!(pairing_x(&r, &w).abs() < 1e-12);
        assert!(dual_state(&w, DualKind::First, 0.0, 1.0).is_err());
    }

    #[test]
    fn positive_inputs_give_positive_outputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = WitnessFamily::new(4.0, 2.0).unwrap();
        let mut random_psd = || {
            let g = ComplexMatrix::from_fn(2, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            &g * &g.adjoint()
        };
        for _ in 0..10_000 {
            let (x, y) = (random_psd(), random_psd());
            assert!(herm_min_eig(&phi_apply(&w, &x, &y).unwrap()).unwrap() >= -1e-10);
        }
    }
}
