use serde::Serialize;

use crate::qcore::{c, ComplexMatrix, C64};

/// `P_α = [[1, ᾱ], [α, |α|²]]`.
pub fn p_alpha(alpha: C64) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), alpha.conj()], vec![alpha, c(alpha.norm_sqr(), 0.0)]]).expect("2x2")
}

#[derive(Clone, Debug, Serialize)]
pub struct MotivatingSum {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    /// `A_α + B_α^Γ`, the partial transpose taken on the second factor of `M₂ ⊗ M₂`.
    pub sum: ComplexMatrix,
}

/// The two non-linear PSD-valued maps `P_α ↦ A_α`, `P_α ↦ B_α` whose sum
/// `A_α + B_α^Γ` is linear in `P_α`.
pub fn motivating_sum(alpha: C64) -> MotivatingSum {
    let block = |w: C64| {
        let mut m = ComplexMatrix::zeros(4);
        m[(1, 1)] = c(w.norm_sqr(), 0.0);
        m[(1, 2)] = w;
        m[(2, 1)] = w.conj();
        m[(2, 2)] = c(1.0, 0.0);
        m
    };
    let a = block(alpha.conj() + alpha);
    let b = block(alpha.conj() - alpha);
    let sum = &a + &b.transpose_index_bits(0b01);
    MotivatingSum { a, b, sum }
}

/// The linear map on `M₂` that agrees with `P_α ↦ A_α + B_α^Γ` on every `P_α`.
pub fn motivating_linear(p: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(p.dim(), 2, "motivating_linear takes a 2x2 matrix");
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 3)] = p[(0, 1)] - p[(1, 0)];
    m[(3, 0)] = p[(1, 0)] - p[(0, 1)];
    m[(1, 1)] = p[(1, 1)].scale(4.0);
    m[(1, 2)] = p[(0, 1)] + p[(1, 0)];
    m[(2, 1)] = p[(0, 1)] + p[(1, 0)];
    m[(2, 2)] = p[(0, 0)].scale(2.0);
    m
}

/// Largest entry of `f(λα₁ + (1−λ)α₂) − λf(α₁) − (1−λ)f(α₂)` for
/// `f(α) = A_α + B_α^Γ`; zero for every collinear triple iff `f` is affine in α.
pub fn affine_residual(a1: C64, a2: C64, lambda: f64) -> f64 {
    let mid = motivating_sum(a1.scale(lambda) + a2.scale(1.0 - lambda)).sum;
    let ends = &motivating_sum(a1).sum.scale(lambda) + &motivating_sum(a2).sum.scale(1.0 - lambda);
    mid.max_abs_diff(&ends)
}
