use serde::Serialize;

use crate::qcore::{ProductVector, C64};
use crate::witness::{all_families, kernel_vector, pairing, FamilyParams, KernelFamily, KernelMember, WitnessFamily};

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    /// First matching family in declaration order.
    pub family: Option<KernelFamily>,
    pub params: Option<FamilyParams>,
    /// Every family the vector fits. Flat families overlap on basis vectors,
    /// e.g. `|000⟩` lies in both `0y0` and `00z`.
    pub matches: Vec<KernelMember>,
    pub pairing: f64,
}

/// Support of a flat family in the 8-dimensional basis.
fn flat_support(family: KernelFamily) -> [usize; 2] {
    let (free, fixed) = family.flat_shape().expect("flat family");
    let bit = 1 << (3 - free);
    let mut base = 0;
    let mut others = (1..=3).filter(|&p| p != free);
    for f in fixed {
        let p = others.next().unwrap();
        base |= f << (3 - p);
    }
    [base, base | bit]
}

/// Fits `v`, up to per-party scale and phase, to the kernel families.
///
/// Matching uses the tolerance `δ = 100√tol`: flat families allow entries
/// outside their support up to `δ` times the largest, the other families
/// allow an angle of `δ` between `v` and the fitted member. Vectors whose
/// pairing exceeds `tol` are not in the kernel and get no family.
pub fn kernel_classify(w: &WitnessFamily, v: &ProductVector, tol: f64) -> Classification {
    let n = v.normalized();
    let value = pairing(&n.projector(), &w.choi()).unwrap_or(f64::INFINITY);
    let mut out = Classification {
        family: None,
        params: None,
        matches: Vec::new(),
        pairing: value,
    };
    if value.abs() > tol {
        return out;
    }
    let delta = (100.0 * tol.sqrt()).min(0.1);
    let full = n.full();
    let peak = full.iter().map(|z| z.norm()).fold(0.0, f64::max);

    for family in all_families() {
        if family.is_flat() {
            let support = flat_support(family);
            let outside = (0..8)
                .filter(|k| !support.contains(k))
                .map(|k| full[k].norm())
                .fold(0.0, f64::max);
            if outside <= delta * peak {
                out.matches
                    .push(KernelMember::flat(family, [full[support[0]], full[support[1]]]));
            }
        } else if let Some(params) = fit_moduli(w, &n, family, delta) {
            out.matches.push(params);
        }
    }
    if let Some(first) = out.matches.first() {
        out.family = Some(first.family);
        out.params = Some(first.params);
    }
    out
}

/// Fits `(a₁, a₂)` from the moduli of the first two factor ratios and
/// accepts if the fitted member is within angle `delta` of `v`. Comparing
/// whole vectors keeps members with tiny entries classifiable.
fn fit_moduli(w: &WitnessFamily, v: &ProductVector, family: KernelFamily, delta: f64) -> Option<KernelMember> {
    if v.has_zero_entry() {
        return None;
    }
    // the family factor is (p, ω^k), so |x₁/x₀| = 1/p
    let p1 = (v.x()[0] / v.x()[1]).norm();
    let p2 = (v.y()[0] / v.y()[1]).norm();
    let u = w.u();
    let member = KernelMember::moduli(family, p1 * p1 / u, u * p2 * p2);
    let fitted = kernel_vector(w, &member).ok()?;
    let overlap: C64 = fitted.full().iter().zip(v.full()).map(|(a, b)| a.conj() * b).sum();
    let cos = overlap.norm() / (fitted.norm() * v.norm());
    let sin = (1.0 - cos * cos).max(0.0).sqrt();
    (sin <= delta).then_some(member)
}
