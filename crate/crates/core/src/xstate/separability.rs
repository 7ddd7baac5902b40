use std::fmt;

use serde::Serialize;

use super::XMatrix;
use crate::qcore::{ProductVector, C64};
use crate::{Error, Result};

const REL_TOL: f64 = 1e-9;

/// A failed condition of the rank-four separability criterion.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Violation {
    /// `a_i` or `b_i` is not strictly positive (1-based index).
    NonPositiveDiagonal { index: usize },
    /// `a_i b_i ≠ |c_j|²` (1-based indices).
    ProductModulus { i: usize, j: usize },
    /// `a₁a₄ ≠ a₂a₃`.
    DiagonalBalance,
    /// `c₁c₄ ≠ c₂c₃`.
    PhaseBalance,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositiveDiagonal { index } => write!(f, "a{index} or b{index} is not positive"),
            Violation::ProductModulus { i, j } => write!(f, "a{i}*b{i} != |c{j}|^2"),
            Violation::DiagonalBalance => write!(f, "a1*a4 != a2*a3"),
            Violation::PhaseBalance => write!(f, "c1*c4 != c2*c3"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparabilityReport {
    pub separable: bool,
    pub violated: Vec<Violation>,
}

/// Rank-four separability of a non-diagonal X-state.
///
/// `X(a, b, c)` is a separable state of rank four iff `a_i b_i = |c_j|²` for
/// all `i, j`, `a₁a₄ = a₂a₃` and `c₁c₄ = c₂c₃`. Inputs are normalized so
/// that `max a_i b_i = 1` before the relative `1e-9` comparisons.
pub fn rank4_separability_check(x: &XMatrix) -> Result<SeparabilityReport> {
    let c_max = x.c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let ab_max = (0..4).map(|i| (x.a[i] * x.b[i]).abs()).fold(0.0, f64::max);
    if c_max <= 1e-12 * ab_max.sqrt().max(1.0) {
        return Err(Error::DiagonalXMatrix);
    }
    let scale = if ab_max > 0.0 { ab_max } else { c_max * c_max };
    let x = x.scale(1.0 / scale.sqrt());

    let mut violated = Vec::new();
    for i in 0..4 {
        if x.a[i] <= 0.0 || x.b[i] <= 0.0 {
            violated.push(Violation::NonPositiveDiagonal { index: i + 1 });
        }
    }
    for i in 0..4 {
        let ab = x.a[i] * x.b[i];
        for j in 0..4 {
            if (ab - x.c[j].norm_sqr()).abs() > REL_TOL {
                violated.push(Violation::ProductModulus { i: i + 1, j: j + 1 });
            }
        }
    }
    let (d1, d2) = (x.a[0] * x.a[3], x.a[1] * x.a[2]);
    if (d1 - d2).abs() > REL_TOL * d1.abs().max(d2.abs()).max(f64::MIN_POSITIVE) {
        violated.push(Violation::DiagonalBalance);
    }
    if (x.c[0] * x.c[3] - x.c[1] * x.c[2]).norm() > REL_TOL {
        violated.push(Violation::PhaseBalance);
    }
    Ok(SeparabilityReport {
        separable: violated.is_empty(),
        violated,
    })
}

/// The four product vectors whose average projector is the X-part of `|v⟩⟨v|`.
///
/// With `|x±⟩ = (x₀, ±x₁)` and likewise for `y, z`, the sign patterns are
/// `(+,+,+), (+,−,−), (−,+,−), (−,−,+)`.
pub fn xpart_decompose(v: &ProductVector) -> Result<[ProductVector; 4]> {
    if v.has_zero_entry() {
        return Err(Error::ZeroEntry);
    }
    let flip = |w: [C64; 2], sign: f64| [w[0], w[1] * sign];
    let signs = [(1.0, 1.0, 1.0), (1.0, -1.0, -1.0), (-1.0, 1.0, -1.0), (-1.0, -1.0, 1.0)];
    Ok(signs.map(|(sx, sy, sz)| ProductVector::new(flip(v.x(), sx), flip(v.y(), sy), flip(v.z(), sz))))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reconstruction {
    /// `(p₁, α₁) ⊗ (p₂, α₂) ⊗ (p₃, α₃)` with `p_i > 0`, `|α_i| = 1`.
    pub v: ProductVector,
    /// `r` with `r · X = xpart(|v⟩⟨v|)`.
    pub scale: f64,
}

/// Recovers the product vector behind a rank-four separable X-state.
///
/// Expanding `(p₁,α₁)⊗(p₂,α₂)⊗(p₃,α₃)` gives squared moduli
/// `r·a = (P₁P₂P₃, P₁P₂, P₁P₃, P₁)` and `r·b = (1, P₃, P₂, P₂P₃)` with
/// `P_i = p_i²`, so `r = 1/b₁`, `P₁ = r a₄`, `P₂ = r b₃`, `P₃ = r b₂`. The
/// phases satisfy `α₃² = c₂/c₁`, `α₂² = c₃/c₁` and `α₁α₂α₃ = conj(c₁)/|c₁|`
/// (directions only). Of the four sign choices the one with
/// `arg α₁ ∈ [0, π)` and then `arg α₂ ∈ [0, π)` is returned.
pub fn reconstruct_product_vector(x: &XMatrix) -> Result<Reconstruction> {
    let report = rank4_separability_check(x)?;
    if !report.separable {
        let msg: Vec<String> = report.violated.iter().map(|v| v.to_string()).collect();
        return Err(Error::NotRank4Separable(msg.join("; ")));
    }
    let r = 1.0 / x.b[0];
    let p1 = (r * x.a[3]).sqrt();
    let p2 = (r * x.b[2]).sqrt();
    let p3 = (r * x.b[1]).sqrt();

    let unit = |z: C64| z / z.norm();
    let g = x.c.map(unit);
    let mut a3 = (g[1] / g[0]).sqrt();
    let mut a2 = (g[2] / g[0]).sqrt();
    let mut a1 = g[0].conj() / (a2 * a3);
    if !upper_half(a1) {
        // flipping α₂ flips α₁
        a2 = -a2;
        a1 = -a1;
    }
    if !upper_half(a2) {
        // flipping α₂ and α₃ together keeps α₁
        a2 = -a2;
        a3 = -a3;
    }
    let re = |p: f64| C64::new(p, 0.0);
    let v = ProductVector::new([re(p1), unit(a1)], [re(p2), unit(a2)], [re(p3), unit(a3)]);
    Ok(Reconstruction { v, scale: r })
}

/// `arg z ∈ [0, π)`.
fn upper_half(z: C64) -> bool {
    z.im > 0.0 || (z.im == 0.0 && z.re > 0.0)
}
