use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::qcore::{partial_conjugate, ProductVector, SubsetMask, C64};
use crate::witness::{all_families, kernel_members, kernel_vector, Grid, KernelFamily, WitnessFamily};
use crate::{Error, Result};

/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct SubsetRank {
    pub subset: SubsetMask,
    pub rank: usize,
    /// Relative to the largest singular value.
    pub smallest_kept_singular_value: f64,
    pub vectors_used: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpanningReport {
    pub s: f64,
    pub t: f64,
    pub grid: Option<Grid>,
    pub families: Vec<KernelFamily>,
    pub subsets: Vec<SubsetRank>,
}

impl SpanningReport {
    /// Rank 8 for every subset.
    pub fn spans(&self) -> bool {
        self.subsets.iter().all(|r| r.rank == 8)
    }

    pub fn min_margin(&self) -> f64 {
        self.subsets
            .iter()
            .map(|r| r.smallest_kept_singular_value)
            .fold(f64::INFINITY, f64::min)
    }
}

fn subset_rank(vectors: &[ProductVector], subset: SubsetMask) -> SubsetRank {
    let rows: Vec<[C64; 8]> = vectors
        .iter()
        .map(|v| {
            let full = *partial_conjugate(v, subset).full();
            let n = full.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            full.map(|z| z / n)
        })
        .collect();
    let m = DMatrix::from_fn(rows.len(), 8, |i, j| rows[i][j]);
    let sigma = m.singular_values();
    let largest = sigma.iter().cloned().fold(0.0, f64::max);
    let kept: Vec<f64> = sigma.iter().map(|s| s / largest).filter(|&r| r >= RANK_TOL).collect();
    SubsetRank {
        subset,
        rank: kept.len(),
        smallest_kept_singular_value: kept.iter().cloned().fold(f64::INFINITY, f64::min),
        vectors_used: vectors.len(),
    }
}

/// Rank of `{Γ(S)v}` for each of the eight subsets `S`. Needs at least 8 vectors.
pub fn spanning_check_vectors(vectors: &[ProductVector]) -> Result<Vec<SubsetRank>> {
    if vectors.len() < 8 {
        return Err(Error::GridTooSmall(vectors.len()));
    }
    if let Some(v) = vectors.iter().find(|v| v.norm() == 0.0) {
        return Err(Error::Malformed(format!("zero vector in spanning set: {v:?}")));
    }
    let subsets: Vec<SubsetMask> = SubsetMask::all().collect();
    Ok(subsets.par_iter().map(|&s| subset_rank(vectors, s)).collect())
}

/// Spanning check restricted to some kernel families.
pub fn spanning_check_families(w: &WitnessFamily, grid: &Grid, families: &[KernelFamily]) -> Result<SpanningReport> {
    let vectors = kernel_members(grid, families)
        .iter()
        .map(|m| kernel_vector(w, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpanningReport {
        s: w.s(),
        t: w.t(),
        grid: Some(grid.clone()),
        families: families.to_vec(),
        subsets: spanning_check_vectors(&vectors)?,
    })
}

/// Full spanning property over all fourteen kernel families.
pub fn spanning_check(w: &WitnessFamily, grid: &Grid) -> Result<SpanningReport> {
    spanning_check_families(w, grid, &all_families())
}
