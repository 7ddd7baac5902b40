use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::ppt::{ppt_check, PPT_TOL};
use crate::qcore::{ComplexMatrix, C64};
use crate::witness::{all_families, kernel_members, kernel_vector, pairing, Grid, WitnessFamily};
use crate::xstate::XMatrix;
use crate::{Error, Result};

/// Relative width of the final bisection bracket on the PPT boundary.
const BISECT_TOL: f64 = 1e-9;
/// Fraction of the boundary step actually taken.
const RETREAT: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DirectionKind {
    /// `X(0, 0, −(1, 1, −1, 1)/2)`.
    XShaped,
    /// Seeded Gaussian traceless Hermitian matrix with negative pairing.
    Random,
}

#[derive(Clone, Debug, Serialize)]
pub struct DetectionCertificate {
    pub s: f64,
    pub t: f64,
    pub seed: u64,
    pub direction_kind: DirectionKind,
    /// Unit trace, PPT, with negative pairing against `C_φ`.
    pub rho: ComplexMatrix,
    pub pairing_value: f64,
    /// Smallest eigenvalue of `ρ^{T(S)}`, indexed by the mask bits of `S`.
    pub min_pt_eigs: [f64; 8],
    pub lambda_max: f64,
    pub lambda: f64,
}

/// Average of the unit-trace kernel projectors over the default grid.
///
/// The kernel vectors span for every partial conjugation, so every partial
/// transpose of this state is positive definite.
fn interior_point(w: &WitnessFamily) -> Result<ComplexMatrix> {
    let members = kernel_members(&Grid::standard(), &all_families());
    let mut acc = ComplexMatrix::zeros(8);
    for m in &members {
        acc = &acc + &kernel_vector(w, m)?.normalized().projector();
    }
    Ok(acc.scale(1.0 / members.len() as f64))
}

fn random_direction(w: &WitnessFamily, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let choi = w.choi();
    loop {
        let mut g = || -> f64 { StandardNormal.sample(&mut rng) };
        let m = ComplexMatrix::from_fn(8, |_, _| C64::new(g(), g()));
        let h = (&m + &m.adjoint()).scale(0.5);
        let traceless = &h - &ComplexMatrix::identity(8).scale(h.trace().re / 8.0);
        let p = pairing(&traceless, &choi).expect("hermitian by construction");
        if p.abs() > 1e-3 {
            let d = if p < 0.0 { traceless } else { traceless.scale(-1.0) };
            return d.scale(1.0 / d.frobenius_norm());
        }
    }
}

fn is_ppt_strict(m: &ComplexMatrix) -> Result<bool> {
    Ok(ppt_check(m)?.min() >= 0.0)
}

/// A PPT state detected by the witness: a witness of indecomposability.
///
/// Starts from an interior separable state pairing to zero, moves along a
/// direction of negative pairing up to the PPT boundary (bisection to a
/// relative `1e-9`), then steps back to `0.9` of the way.
pub fn find_ppt_entangled(w: &WitnessFamily, seed: u64, random: bool) -> Result<DetectionCertificate> {
    let base = interior_point(w)?;
    let (kind, dir) = if random {
        (DirectionKind::Random, random_direction(w, seed))
    } else {
        let h = 0.5;
        let c = [
            C64::new(-h, 0.0),
            C64::new(-h, 0.0),
            C64::new(h, 0.0),
            C64::new(-h, 0.0),
        ];
        (DirectionKind::XShaped, XMatrix::new([0.0; 4], [0.0; 4], c).to_matrix())
    };
    let at = |lambda: f64| &base + &dir.scale(lambda);

    let mut hi = 1.0;
    while is_ppt_strict(&at(hi))? {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::DetectionFailed("direction never leaves the PPT cone".into()));
        }
    }
    let mut lo = 0.0;
    while hi - lo > BISECT_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if is_ppt_strict(&at(mid))? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = RETREAT * lo;
    let rho = at(lambda);
    let report = ppt_check(&rho)?;
    let pairing_value = pairing(&rho, &w.choi())?;
    if !report.is_ppt || pairing_value >= 0.0 {
        return Err(Error::DetectionFailed(format!(
            "state at λ = {lambda} has pairing {pairing_value} and min partial-transpose eigenvalue {}",
            report.min()
        )));
    }
    Ok(DetectionCertificate {
        s: w.s(),
        t: w.t(),
        seed,
        direction_kind: kind,
        rho,
        pairing_value,
        min_pt_eigs: report.min_eigs,
        lambda_max: lo,
        lambda,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PerturbationReport {
    pub trials: usize,
    /// Perturbed states that are still PPT with negative pairing.
    pub stable: usize,
    pub max_pairing: f64,
    pub min_pt_eig: f64,
}

/// Re-checks the certificate after adding `trials` random traceless
/// Hermitian perturbations of Frobenius norm `size`.
pub fn perturbation_check(
    w: &WitnessFamily,
    cert: &DetectionCertificate,
    trials: usize,
    size: f64,
    seed: u64,
) -> Result<PerturbationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let choi = w.choi();
    let (mut stable, mut max_pairing, mut min_pt_eig) = (0, f64::NEG_INFINITY, f64::INFINITY);
    for _ in 0..trials {
        let mut g = || -> f64 { StandardNormal.sample(&mut rng) };
        let m = ComplexMatrix::from_fn(8, |_, _| C64::new(g(), g()));
        let h = (&m + &m.adjoint()).scale(0.5);
        let h = &h - &ComplexMatrix::identity(8).scale(h.trace().re / 8.0);
        let rho = &cert.rho + &h.scale(size / h.frobenius_norm());
        let p = pairing(&rho, &choi)?;
        let e = ppt_check(&rho)?.min();
        max_pairing = max_pairing.max(p);
        min_pt_eig = min_pt_eig.min(e);
        if p < 0.0 && e >= -PPT_TOL {
            stable += 1;
        }
    }
    Ok(PerturbationReport {
        trials,
        stable,
        max_pairing,
        min_pt_eig,
    })
}
