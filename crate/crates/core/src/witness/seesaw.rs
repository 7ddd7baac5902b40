use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::WitnessFamily;
use crate::qcore::{eigh, ComplexMatrix, ProductVector, C64};
use crate::{Error, Result};

pub const DEFAULT_RESTARTS: usize = 200;

const STAGNATION: f64 = 1e-12;
const MAX_CYCLES: usize = 300;

#[derive(Clone, Debug, Serialize)]
pub struct SeeSawResult {
    /// `⟨ξ|W|ξ⟩` at the returned unit product vector.
    pub value: f64,
    pub argmin: ProductVector,
    pub restart: usize,
    pub cycles: usize,
}

/// Effective 2×2 matrix seen by `party` (0-based) with the other factors fixed.
fn effective(w: &ComplexMatrix, factors: &[[C64; 2]; 3], party: usize) -> ComplexMatrix {
    let bit = 2 - party;
    let weight = |idx: usize| -> C64 {
        (0..3)
            .filter(|&p| p != party)
            .map(|p| factors[p][(idx >> (2 - p)) & 1])
            .product()
    };
    let mut m = ComplexMatrix::zeros(2);
    for i in 0..8 {
        let wi = weight(i).conj();
        for j in 0..8 {
            m[((i >> bit) & 1, (j >> bit) & 1)] += wi * w[(i, j)] * weight(j);
        }
    }
    m
}

fn value_at(w: &ComplexMatrix, factors: &[[C64; 2]; 3]) -> f64 {
    let v = ProductVector::new(factors[0], factors[1], factors[2]);
    w.quad_form(v.full()).re
}

/// Alternating minimization of `⟨ξ|W|ξ⟩` over unit product vectors, starting
/// from `start`. Each step replaces one factor by the lowest eigenvector of
/// its effective 2×2 matrix; cycles stop once the value changes by less than
/// `1e-12`.
pub fn seesaw_from(w: &ComplexMatrix, start: &ProductVector) -> Result<(f64, ProductVector, usize)> {
    if w.dim() != 8 {
        return Err(Error::InvalidDimension(w.dim()));
    }
    w.ensure_hermitian()?;
    let start = start.normalized();
    let mut factors = [start.x(), start.y(), start.z()];
    let mut value = value_at(w, &factors);
    let mut cycles = 0;
    while cycles < MAX_CYCLES {
        cycles += 1;
        for party in 0..3 {
            let mut eff = effective(w, &factors, party);
            // restore exact Hermiticity lost to rounding
            let sym = (&eff + &eff.adjoint()).scale(0.5);
            eff = sym;
            let e = eigh(&eff)?;
            let v = e.vector(0);
            factors[party] = [v[0], v[1]];
        }
        let next = value_at(w, &factors);
        let done = (value - next).abs() < STAGNATION;
        value = next;
        if done {
            break;
        }
    }
    Ok((value, ProductVector::new(factors[0], factors[1], factors[2]), cycles))
}

fn random_unit_factor(rng: &mut ChaCha8Rng) -> [C64; 2] {
    let mut g = || -> f64 { StandardNormal.sample(rng) };
    let v = [C64::new(g(), g()), C64::new(g(), g())];
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

/// Start vector for one restart; each restart draws from its own stream.
pub(crate) fn restart_start(seed: u64, restart: usize) -> ProductVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    let x = random_unit_factor(&mut rng);
    let y = random_unit_factor(&mut rng);
    let z = random_unit_factor(&mut rng);
    ProductVector::new(x, y, z)
}

/// Global see-saw minimum of `⟨ξ|W|ξ⟩` over `restarts` seeded starts.
///
/// Restarts run in parallel; the result is the smallest value, ties broken
/// by restart index, so the outcome does not depend on scheduling.
pub fn seesaw_min(w: &ComplexMatrix, restarts: usize, seed: u64) -> Result<SeeSawResult> {
    let runs = seesaw_all(w, restarts, seed)?;
    Ok(runs
        .into_iter()
        .min_by(|a, b| a.value.total_cmp(&b.value).then(a.restart.cmp(&b.restart)))
        .expect("at least one restart"))
}

/// Every restart's local minimum, in restart order.
pub fn seesaw_all(w: &ComplexMatrix, restarts: usize, seed: u64) -> Result<Vec<SeeSawResult>> {
    if restarts == 0 {
        return Err(Error::Malformed("restarts must be at least 1".into()));
    }
    (0..restarts)
        .into_par_iter()
        .map(|restart| {
            let (value, argmin, cycles) = seesaw_from(w, &restart_start(seed, restart))?;
            Ok(SeeSawResult {
                value,
                argmin,
                restart,
                cycles,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    /// Smallest pairing `⟨|ξ⟩⟨ξ|, φ⟩` found over unit product vectors.
    pub min_value: f64,
    /// The minimizer, as a state-side vector: `pairing(|ξ⟩⟨ξ|, C_φ) = min_value`.
    pub argmin: ProductVector,
    pub restarts: usize,
    pub seed: u64,
}

/// See-saw check that the pairing with every pure product state is
/// nonnegative.
///
/// `pairing(|ξ⟩⟨ξ|, C) = ⟨ξ̄|C|ξ̄⟩ = ⟨ξ|C̄|ξ⟩`, so the quadratic form of `C̄`
/// is minimized directly over `ξ`.
pub fn verify_positive(w: &WitnessFamily, restarts: usize, seed: u64) -> Result<PositivityReport> {
    let best = seesaw_min(&w.choi().conj(), restarts, seed)?;
    Ok(PositivityReport {
        min_value: best.value,
        argmin: best.argmin,
        restarts,
        seed,
    })
}
