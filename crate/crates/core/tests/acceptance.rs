//! Acceptance criteria, run in sequence with one PASS/FAIL line each.
//!
//! Criterion 11 asks for the motivating sum to be affine in α. It is not:
//! the `(1,1)` entry is `4|α|²`. The sum is linear in `P_α`, which is what
//! the construction needs, and that is checked alongside. The criterion is
//! reported as FAIL, and the runner asserts the predicted residual instead
//! of a pass so that any change in behaviour is still caught.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2, TAU};
use std::io::Write;
use std::time::{Duration, Instant};

use qxwit::certify::{
    exposedness_certificate, find_ppt_entangled, kernel_classify, perturbation_check, spanning_check,
    spanning_check_families, ConstraintSet, ExposednessOptions,
};
use qxwit::qcore::{herm_min_eig, xpart, ComplexMatrix, ProductVector, C64};
use qxwit::witness::{
    affine_residual, all_families, choi_explicit, choi_generic, dual_state, kernel_members, kernel_vector,
    motivating_linear, motivating_sum, p_alpha, pairing, pairing_x, phi_apply, seesaw_all, DualKind, Grid,
    KernelFamily, WitnessFamily,
};
use qxwit::xstate::{block_positivity, rank4_separability_check, reconstruct_product_vector, x_norm, xpart_decompose};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn families() -> Vec<WitnessFamily> {
    [(8f64.sqrt(), 8f64.sqrt()), (4.0, 2.0), (2.0, 4.0), (8.0, 1.0)]
        .iter()
        .map(|&(s, t)| WitnessFamily::new(s, t).unwrap())
        .collect()
}

fn nonzero_vector(rng: &mut ChaCha8Rng) -> ProductVector {
    let mut f = || C64::from_polar(rng.random_range(0.2..2.0), rng.random_range(0.0..TAU));
    ProductVector::new([f(), f()], [f(), f()], [f(), f()])
}

fn c1_choi_consistency() -> Outcome {
    let mut worst = 0.0f64;
    for w in families() {
        let generic = choi_generic(|x, y| phi_apply(&w, x, y).unwrap());
        worst = worst.max(generic.max_abs_diff(&choi_explicit(&w)));
    }
    Outcome {
        pass: worst <= 1e-12,
        detail: format!("max entry difference {worst:.1e}"),
    }
}

fn c2_positivity() -> Outcome {
    let w = WitnessFamily::symmetric();
    let runs = seesaw_all(&w.choi().conj(), 1000, 0).unwrap();
    let min = runs.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    let classified = runs
        .iter()
        .filter(|r| r.value <= 1e-10)
        .filter(|r| kernel_classify(&w, &r.argmin, 1e-9).family.is_some())
        .count();
    Outcome {
        pass: min >= -1e-9 && classified >= 1,
        detail: format!("min {min:.2e} over 1000 restarts, {classified} zero minimizers classified"),
    }
}

fn c3_not_completely_positive() -> Outcome {
    let eigs: Vec<f64> = families().iter().map(|w| herm_min_eig(&w.choi()).unwrap()).collect();
    let worst = eigs.iter().map(|e| (e + 1.0).abs()).fold(0.0, f64::max);
    Outcome {
        pass: worst <= 1e-10,
        detail: format!("min eigenvalues {eigs:?}"),
    }
}

fn c4_kernel_families() -> Outcome {
    let mut count = 0;
    let mut worst = 0.0f64;
    for w in families() {
        let choi = w.choi();
        let members = kernel_members(&Grid::standard(), &all_families());
        count = members.len();
        for m in &members {
            let v = kernel_vector(&w, m).unwrap();
            worst = worst.max(pairing(&v.projector(), &choi).unwrap().abs());
        }
    }
    Outcome {
        pass: worst <= 1e-9 && count >= 60,
        detail: format!("{count} vectors per (s,t), max |pairing| {worst:.1e}"),
    }
}

fn c5_dual_states() -> Outcome {
    let (mut separable, mut total) = (0, 0);
    let (mut worst_pairing, mut worst_match) = (0.0f64, 0.0f64);
    for w in families() {
        let choi = w.choi();
        for (a1, a2) in Grid::fine().moduli_pairs() {
            for kind in [DualKind::First, DualKind::Second] {
                let x = dual_state(&w, kind, a1, a2).unwrap();
                total += 1;
                if rank4_separability_check(&x).unwrap().separable {
                    separable += 1;
                }
                let px = pairing_x(&x, &w);
                worst_pairing = worst_pairing.max(px.abs());
                worst_match = worst_match.max((px - pairing(&x.to_matrix(), &choi).unwrap()).abs());
            }
        }
    }
    Outcome {
        pass: separable == total && worst_pairing <= 1e-9 && worst_match <= 1e-10,
        detail: format!(
            "{separable}/{total} separable, max |pairing_x| {worst_pairing:.1e}, max mismatch {worst_match:.1e}"
        ),
    }
}

fn c6_x_norm() -> Outcome {
    let one = C64::new(1.0, 0.0);
    let z = [one, one, -one, one];
    let norm = x_norm(&z);
    let norm_ok = (norm - 2.0 * SQRT_2).abs() <= 1e-9;
    let mut equality_ok = true;
    for w in families() {
        let bp = block_positivity(w.t(), w.s(), &z).unwrap();
        equality_ok &= bp.block_positive && bp.equality && ((w.s() * w.t()).sqrt() - bp.x_norm).abs() <= 1e-9;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bound_failures = 0;
    for _ in 0..10_000 {
        let z: [C64; 4] = std::array::from_fn(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let one_norm: f64 = z.iter().map(|v| v.norm()).sum();
        let xn = x_norm(&z);
        if xn < one_norm * FRAC_1_SQRT_2 - 1e-9 || xn > one_norm + 1e-9 {
            bound_failures += 1;
        }
    }
    Outcome {
        pass: norm_ok && equality_ok && bound_failures == 0,
        detail: format!(
            "‖(1,1,−1,1)‖_X = {norm:.12}, equality {equality_ok}, {bound_failures} bound violations in 10⁴"
        ),
    }
}

fn c7_decomposition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst_identity, mut worst_round_trip) = (0.0f64, 0.0f64);
    let mut unmatched = 0;
    for _ in 0..1000 {
        let v = nonzero_vector(&mut rng);
        let x = xpart(&v.projector()).unwrap();
        let parts = xpart_decompose(&v).unwrap();
        let avg = parts
            .iter()
            .fold(ComplexMatrix::zeros(8), |acc, p| &acc + &p.projector())
            .scale(0.25);
        worst_identity = worst_identity.max(avg.max_abs_diff(&x.to_matrix()));

        let rec = reconstruct_product_vector(&x).unwrap();
        let back = xpart(&rec.v.projector()).unwrap();
        worst_round_trip = worst_round_trip.max(back.max_abs_diff(&x.scale(rec.scale)) / (1.0 + rec.scale));
        let ratio = |f: [C64; 2]| f[1] / f[0];
        let matched = parts.iter().any(|p| {
            (1..=3)
                .all(|k| (ratio(p.party(k)) - ratio(rec.v.party(k))).norm() <= 1e-10 * (1.0 + ratio(p.party(k)).norm()))
        });
        if !matched {
            unmatched += 1;
        }
    }
    Outcome {
        pass: worst_identity <= 1e-12 && worst_round_trip <= 1e-10 && unmatched == 0,
        detail: format!(
            "identity {worst_identity:.1e}, round trip {worst_round_trip:.1e}, {unmatched} unmatched reconstructions"
        ),
    }
}

fn c8_spanning() -> Outcome {
    let w = WitnessFamily::symmetric();
    let full = spanning_check(&w, &Grid::standard()).unwrap();
    let flat: Vec<KernelFamily> = all_families().into_iter().filter(|f| f.is_flat()).collect();
    let flat_only = spanning_check_families(&w, &Grid::standard(), &flat).unwrap();
    let flat_ranks: Vec<usize> = flat_only.subsets.iter().map(|r| r.rank).collect();
    Outcome {
        pass: full.spans() && full.min_margin() >= 1e-6 && flat_ranks.iter().any(|&r| r < 8),
        detail: format!("margin {:.3e}, flat-only ranks {flat_ranks:?}", full.min_margin()),
    }
}

fn c9_exposedness() -> Outcome {
    let w = WitnessFamily::symmetric();
    let grid = Grid::standard();
    let cert = exposedness_certificate(&w, &grid, 1e-8, &ExposednessOptions::default()).unwrap();
    let structural = |set| {
        let opts = ExposednessOptions {
            constraints: set,
            restarts: 0,
            ..Default::default()
        };
        exposedness_certificate(&w, &grid, 1e-8, &opts)
            .unwrap()
            .surviving_ray_dim
    };
    let reduced = structural(ConstraintSet::FlatOnly);
    let matrices_only = structural(ConstraintSet::WithoutDualStates);
    let err = cert.direction_match_error.unwrap_or(f64::INFINITY);
    Outcome {
        pass: cert.certified && cert.surviving_ray_dim == 1 && err < 1e-8 && reduced > 1,
        detail: format!(
            "nullspace {}, surviving {}, match {err:.1e}, {} pruning runs falsified {}; flat-only constraints {reduced} \
             (dropping only the ρ matrices: {matrices_only})",
            cert.nullspace_dim,
            cert.surviving_ray_dim,
            cert.pruning.len(),
            cert.pruning_falsified,
        ),
    }
}

fn c10_detection() -> Outcome {
    let w = WitnessFamily::symmetric();
    let cert = find_ppt_entangled(&w, 0, false).unwrap();
    let trace = cert.rho.trace().re;
    let min_pt = cert.min_pt_eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    let stability = perturbation_check(&w, &cert, 100, 1e-5, 10).unwrap();
    Outcome {
        pass: (trace - 1.0).abs() < 1e-12 && min_pt >= -1e-10 && cert.pairing_value <= -1e-3 && stability.stable == 100,
        detail: format!(
            "pairing {:.4e}, min PT eigenvalue {min_pt:.3e}, {}/100 perturbations stable",
            cert.pairing_value, stability.stable
        ),
    }
}

/// Returns the outcome and the largest affine residual observed.
fn c11_motivating() -> (Outcome, f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut alpha = || C64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
    let mut worst_psd = f64::INFINITY;
    for _ in 0..1000 {
        let m = motivating_sum(alpha());
        worst_psd = worst_psd
            .min(herm_min_eig(&m.a).unwrap())
            .min(herm_min_eig(&m.b).unwrap());
    }
    let (mut worst_affine, mut worst_predicted, mut worst_linear) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let (a1, a2, lambda) = (alpha(), alpha(), 0.37);
        let r = affine_residual(a1, a2, lambda);
        worst_affine = worst_affine.max(r);
        let predicted = 4.0 * lambda * (1.0 - lambda) * (a1 - a2).norm_sqr();
        worst_predicted = worst_predicted.max((r - predicted).abs() / (1.0 + predicted));
        let a = alpha();
        worst_linear = worst_linear.max(motivating_sum(a).sum.max_abs_diff(&motivating_linear(&p_alpha(a))));
    }
    let outcome = Outcome {
        pass: worst_psd >= -1e-12 && worst_affine <= 1e-12,
        detail: format!(
            "min eigenvalue {worst_psd:.1e}; affine residual up to {worst_affine:.2e} (from the 4|α|² entry); \
             linear in P_α to {worst_linear:.1e}"
        ),
    };
    (outcome, worst_predicted, worst_linear)
}

fn report(n: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let pass = outcome.pass && elapsed < limit;
    // straight to the handle so the line survives libtest's output capture
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "{} criterion {n:>2} {name}: {} [{:.2?} of {:?}]",
        if pass { "PASS" } else { "FAIL" },
        outcome.detail,
        elapsed,
        limit
    )
    .and_then(|()| out.flush())
    .expect("write report line");
    pass
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

#[test]
fn acceptance() {
    let s = Duration::from_secs;
    let criteria: [Criterion; 10] = [
        ("choi consistency", s(1), c1_choi_consistency),
        ("positivity", s(30), c2_positivity),
        ("not completely positive", s(1), c3_not_completely_positive),
        ("kernel families", s(1), c4_kernel_families),
        ("dual states", s(1), c5_dual_states),
        ("x-norm", s(10), c6_x_norm),
        ("decomposition round trip", s(5), c7_decomposition),
        ("full spanning property", s(1), c8_spanning),
        ("exposedness", s(120), c9_exposedness),
        ("ppt detection", s(30), c10_detection),
    ];
    let mut failed = Vec::new();
    for (k, (name, limit, f)) in criteria.into_iter().enumerate() {
        if !report(k + 1, name, limit, f) {
            failed.push(k + 1);
        }
    }

    let (mut predicted, mut linear) = (f64::INFINITY, f64::INFINITY);
    let pass11 = report(11, "motivating construction", s(1), || {
        let (o, p, l) = c11_motivating();
        (predicted, linear) = (p, l);
        o
    });
    if !pass11 {
        failed.push(11);
    }

    // 11 is expected to fail for the reason in the module docs; anything else is a regression
    assert_eq!(failed, vec![11], "unexpected acceptance outcome");
    assert!(
        predicted < 1e-12,
        "affine residual differs from 4λ(1−λ)|α₁−α₂|²: {predicted:e}"
    );
    assert!(linear < 1e-12, "motivating sum is not linear in P_α: {linear:e}");
}
