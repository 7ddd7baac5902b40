use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::linalg::{herm_from_vec, herm_to_vec, nullspace, rows_matrix};
use super::spanning::RANK_TOL;
use crate::qcore::{ComplexMatrix, ProductVector, C64};
use crate::witness::{
    all_families, dual_state, kernel_members, kernel_vector, seesaw_min, DualKind, Grid, KernelFamily, WitnessFamily,
};
use crate::xstate::x_norm;
use crate::{Error, Result};

/// Basis indices whose projectors are forced into the dual face by the flat
/// families: `|000⟩, |001⟩, |010⟩, |101⟩, |110⟩, |111⟩`.
const PV4_INDICES: [usize; 6] = [0, 1, 2, 5, 6, 7];

/// A product-vector value below `-PRUNE_MARGIN` falsifies block-positivity.
const PRUNE_MARGIN: f64 = 1e-12;

/// Which members of the dual face enter the constraint operator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintSet {
    /// Flat families, `eta`/`zeta` families, the dual states `ρ₁, ρ₂`, and
    /// the six basis projectors.
    #[default]
    Full,
    /// `Full` without the `ρ₁, ρ₂` matrices. The `eta`/`zeta` projectors
    /// still span them, so this pins the same ray.
    WithoutDualStates,
    /// Flat families and the six basis projectors only: neither `ρ₁, ρ₂`
    /// nor the `eta`/`zeta` vectors whose X-parts produce them.
    FlatOnly,
}

/// Generators of the constraint set over `grid`.
pub fn constraint_matrices(w: &WitnessFamily, grid: &Grid, set: ConstraintSet) -> Result<Vec<ComplexMatrix>> {
    let families: Vec<KernelFamily> = match set {
        ConstraintSet::FlatOnly => all_families().into_iter().filter(|f| f.is_flat()).collect(),
        _ => all_families().to_vec(),
    };
    let mut out = kernel_members(grid, &families)
        .iter()
        .map(|m| Ok(kernel_vector(w, m)?.normalized().projector()))
        .collect::<Result<Vec<_>>>()?;
    if set == ConstraintSet::Full {
        for (a1, a2) in grid.moduli_pairs() {
            for kind in [DualKind::First, DualKind::Second] {
                out.push(dual_state(w, kind, a1, a2)?.to_matrix());
            }
        }
    }
    out.extend(
        PV4_INDICES
            .iter()
            .map(|&k| ProductVector::basis(k >> 2, (k >> 1) & 1, k & 1).projector()),
    );
    Ok(out)
}

/// Rows of the operator `W ↦ (⟨W, ρ⟩)_ρ` in vectorized coordinates, each
/// normalized. `⟨W, ρ⟩ = Tr(W ρ̄)`, hence the conjugate.
fn constraint_operator(gens: &[ComplexMatrix]) -> DMatrix<f64> {
    let rows: Vec<Vec<f64>> = gens
        .iter()
        .map(|g| {
            let r = herm_to_vec(&g.conj());
            let n = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            r.into_iter().map(|x| x / n).collect()
        })
        .collect();
    rows_matrix(&rows, 64)
}

#[derive(Clone, Debug, Serialize)]
pub struct DualFaceSpan {
    pub dim: usize,
    pub generators: usize,
    /// Orthonormal under `⟨A, B⟩ = Tr(AB)`.
    pub basis: Vec<ComplexMatrix>,
}

/// Real-linear span of the dual face, sampled over `grid`.
pub fn dual_face_span(w: &WitnessFamily, grid: &Grid) -> Result<DualFaceSpan> {
    let gens = constraint_matrices(w, grid, ConstraintSet::Full)?;
    let rows: Vec<Vec<f64>> = gens.iter().map(herm_to_vec).collect();
    let split = nullspace(&rows_matrix(&rows, 64), RANK_TOL);
    let basis = split
        .row_space
        .column_iter()
        .map(|col| herm_from_vec(col.as_slice()))
        .collect();
    Ok(DualFaceSpan {
        dim: split.rank,
        generators: gens.len(),
        basis,
    })
}

/// Embedding of the 16 real X-shape coordinates into the vectorized space:
/// 8 diagonal entries, then `(Re, Im)` of `W(k, 7−k)` scaled by `√2`.
fn x_embedding() -> DMatrix<f64> {
    let pair_offset = |i: usize, j: usize| 8 + 2 * ((0..i).map(|r| 7 - r).sum::<usize>() + (j - i - 1));
    let mut e = DMatrix::zeros(64, 16);
    for k in 0..8 {
        e[(k, k)] = 1.0;
    }
    for k in 0..4 {
        let off = pair_offset(k, 7 - k);
        e[(off, 8 + 2 * k)] = 1.0;
        e[(off + 1, 9 + 2 * k)] = 1.0;
    }
    e
}

/// Linear equality-case conditions on X-shape coordinates: `z` real and
/// proportional to `(1, 1, −1, 1)`, and `x₄ s = y₄ t`.
fn equality_rows(w: &WitnessFamily) -> DMatrix<f64> {
    let mut e = DMatrix::zeros(8, 16);
    for k in 0..4 {
        e[(k, 9 + 2 * k)] = 1.0;
    }
    e[(4, 10)] = 1.0;
    e[(4, 8)] = -1.0;
    e[(5, 12)] = 1.0;
    e[(5, 8)] = 1.0;
    e[(6, 14)] = 1.0;
    e[(6, 8)] = -1.0;
    e[(7, 3)] = w.s();
    e[(7, 4)] = -w.t();
    e
}

fn stack(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(a.nrows() + b.nrows(), a.ncols());
    out.rows_mut(0, a.nrows()).copy_from(a);
    out.rows_mut(a.nrows(), b.nrows()).copy_from(b);
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExposednessOptions {
    pub constraints: ConstraintSet,
    /// See-saw restarts per pruning run; `0` skips pruning.
    pub restarts: usize,
    pub seed: u64,
    /// Size of the perturbation `ε` applied to the normalized `C_φ`.
    pub step: f64,
}

impl Default for ExposednessOptions {
    fn default() -> Self {
        ExposednessOptions {
            constraints: ConstraintSet::Full,
            restarts: 64,
            seed: 0,
            step: 1e-2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PruneRecord {
    pub direction: usize,
    pub epsilon: f64,
    /// `⟨ξ|Ĉ + εD|ξ⟩` at `xi`, with `Ĉ = C_φ/‖C_φ‖`.
    pub value: f64,
    pub xi: ProductVector,
    pub falsified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EqualityCase {
    /// Distance of `z/‖z‖` from `(1, 1, −1, 1)/2`.
    pub z_pattern_error: f64,
    /// `|x₄ s − y₄ t| / (|x₄| s + |y₄| t)`.
    pub balance_error: f64,
    /// `|√(x₄ y₄) − ‖z‖_X| / ‖z‖_X`: how tightly the survivor sits on the
    /// block-positivity boundary.
    pub norm_equality_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExposednessCertificate {
    pub s: f64,
    pub t: f64,
    pub grid: Grid,
    pub tol: f64,
    pub options: ExposednessOptions,
    pub constraint_count: usize,
    pub nullspace_dim: usize,
    /// Smallest kept singular value of the constraint operator, relative to the largest.
    pub singular_value_gap: f64,
    /// `‖L(C_φ)‖ / ‖C_φ‖`.
    pub choi_residual: f64,
    /// Largest diagonal entry at the six forced-zero indices over a basis of the nullspace.
    pub pv4_diagonal_max: f64,
    pub pruning: Vec<PruneRecord>,
    pub pruning_falsified: bool,
    pub x_shaped_dim: usize,
    pub surviving_ray_dim: usize,
    pub direction_match_error: Option<f64>,
    pub equality_case: Option<EqualityCase>,
    pub survivor: Option<ComplexMatrix>,
    pub certified: bool,
}

/// Orthonormal basis of the nullspace directions orthogonal to `C_φ`,
/// in the order the pruning step visits them.
pub fn prune_directions(w: &WitnessFamily, grid: &Grid, tol: f64, set: ConstraintSet) -> Result<Vec<ComplexMatrix>> {
    let l = constraint_operator(&constraint_matrices(w, grid, set)?);
    Ok(directions_from(&l, &w.choi(), tol))
}

fn directions_from(l: &DMatrix<f64>, choi: &ComplexMatrix, tol: f64) -> Vec<ComplexMatrix> {
    let c = herm_to_vec(choi);
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    let c_row = DMatrix::from_fn(1, 64, |_, j| c[j] / norm);
    let ns = nullspace(&stack(l, &c_row), tol);
    ns.basis
        .column_iter()
        .map(|col| herm_from_vec(col.as_slice()))
        .collect()
}

/// Numerical certificate that the ray through `C_φ` is exposed.
///
/// Pipeline: the nullspace `N` of the constraint operator; the forced zero
/// diagonals; see-saw falsification of every direction of `N` orthogonal
/// to `C_φ`; the X-shaped part of `N` cut down by the equality-case
/// conditions, whose dimension is `surviving_ray_dim`.
pub fn exposedness_certificate(
    w: &WitnessFamily,
    grid: &Grid,
    tol: f64,
    options: &ExposednessOptions,
) -> Result<ExposednessCertificate> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Malformed(format!("tolerance {tol} outside (0, 1)")));
    }
    let gens = constraint_matrices(w, grid, options.constraints)?;
    let l = constraint_operator(&gens);
    let ns = nullspace(&l, tol);
    if ns.min_kept < 10.0 * tol {
        return Err(Error::IllConditioned {
            gap: ns.min_kept,
            limit: 10.0 * tol,
        });
    }

    let choi = w.choi();
    let c_vec = herm_to_vec(&choi);
    let c_norm = choi.frobenius_norm();
    let lc = &l * nalgebra::DVector::from_column_slice(&c_vec);
    let choi_residual = lc.norm() / c_norm;

    let pv4_diagonal_max = ns
        .basis
        .column_iter()
        .flat_map(|col| PV4_INDICES.map(|k| col[k].abs()))
        .fold(0.0, f64::max);

    let pruning = if options.restarts == 0 {
        Vec::new()
    } else {
        prune(&choi.scale(1.0 / c_norm), &directions_from(&l, &choi, tol), options)?
    };
    let pruning_falsified = pruning.iter().all(|r| r.falsified);

    let ex = x_embedding();
    let lx = &l * &ex;
    let x_shaped_dim = nullspace(&lx, tol).dim();
    let survivors = nullspace(&stack(&lx, &equality_rows(w)), tol);
    let surviving_ray_dim = survivors.dim();

    let (mut direction_match_error, mut equality_case, mut survivor) = (None, None, None);
    if surviving_ray_dim == 1 {
        let y = survivors.basis.column(0).into_owned();
        let mut m = herm_from_vec((&ex * &y).as_slice());
        // block-positive witnesses have a nonnegative diagonal
        if (m[(3, 3)] + m[(4, 4)]).re < 0.0 {
            m = m.scale(-1.0);
        }
        let m = m.scale(1.0 / m.frobenius_norm());
        direction_match_error = Some((&m - &choi.scale(1.0 / c_norm)).frobenius_norm());
        equality_case = Some(equality_case_of(w, &m));
        survivor = Some(m);
    }

    let certified = surviving_ray_dim == 1
        && direction_match_error.is_some_and(|e| e < 1e-8)
        && pv4_diagonal_max < 1e-9
        && choi_residual < 1e-9
        && options.restarts > 0
        && pruning_falsified;

    Ok(ExposednessCertificate {
        s: w.s(),
        t: w.t(),
        grid: grid.clone(),
        tol,
        options: options.clone(),
        constraint_count: gens.len(),
        nullspace_dim: ns.dim(),
        singular_value_gap: ns.min_kept,
        choi_residual,
        pv4_diagonal_max,
        pruning,
        pruning_falsified,
        x_shaped_dim,
        surviving_ray_dim,
        direction_match_error,
        equality_case,
        survivor,
        certified,
    })
}

fn equality_case_of(w: &WitnessFamily, m: &ComplexMatrix) -> EqualityCase {
    let z: [C64; 4] = std::array::from_fn(|k| m[(k, 7 - k)]);
    let (x4, y4) = (m[(3, 3)].re, m[(4, 4)].re);
    let zn = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let pattern = [1.0, 1.0, -1.0, 1.0];
    let z_pattern_error = z
        .iter()
        .zip(pattern)
        .map(|(v, p)| (v / zn - C64::new(p / 2.0, 0.0)).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let balance_error = (x4 * w.s() - y4 * w.t()).abs() / (x4.abs() * w.s() + y4.abs() * w.t());
    let xn = x_norm(&z);
    let norm_equality_error = ((x4 * y4).max(0.0).sqrt() - xn).abs() / xn;
    EqualityCase {
        z_pattern_error,
        balance_error,
        norm_equality_error,
    }
}

fn prune(
    c_hat: &ComplexMatrix,
    directions: &[ComplexMatrix],
    options: &ExposednessOptions,
) -> Result<Vec<PruneRecord>> {
    let jobs: Vec<(usize, f64)> = (0..directions.len())
        .flat_map(|d| [(d, options.step), (d, -options.step)])
        .collect();
    jobs.par_iter()
        .enumerate()
        .map(|(job, &(direction, epsilon))| {
            let m = c_hat + &directions[direction].scale(epsilon);
            let seed = options
                .seed
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(job as u64);
            let best = seesaw_min(&m, options.restarts, seed)?;
            Ok(PruneRecord {
                direction,
                epsilon,
                value: best.value,
                xi: best.argmin,
                falsified: best.value < -PRUNE_MARGIN,
            })
        })
        .collect()
}
