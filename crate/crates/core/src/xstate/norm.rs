use std::f64::consts::{SQRT_2, TAU};

use serde::Serialize;

use crate::qcore::C64;
use crate::{Error, Result};

const GRID_POINTS: usize = 4096;
/// Number of grid-local maxima refined by golden-section search.
const REFINED_PEAKS: usize = 4;
const BOUND_SLACK: f64 = 1e-9;
const EQUALITY_TOL: f64 = 1e-8;

fn objective(z: &[C64; 4], theta: f64) -> f64 {
    let e = C64::from_polar(1.0, theta);
    (z[0] * e + z[3].conj()).norm() + (z[1] * e + z[2].conj()).norm()
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-12 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    f1.max(f2)
}

/// `‖z‖_X = max_θ |z₁e^{iθ} + z̄₄| + |z₂e^{iθ} + z̄₃|`.
///
/// The maximum over a 4096-point grid is refined around the largest grid
/// peaks by golden-section search.
pub fn x_norm(z: &[C64; 4]) -> f64 {
    let step = TAU / GRID_POINTS as f64;
    let values: Vec<f64> = (0..GRID_POINTS).map(|k| objective(z, k as f64 * step)).collect();
    let mut peaks: Vec<usize> = (0..GRID_POINTS)
        .filter(|&k| {
            let prev = values[(k + GRID_POINTS - 1) % GRID_POINTS];
            let next = values[(k + 1) % GRID_POINTS];
            values[k] >= prev && values[k] >= next
        })
        .collect();
    peaks.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    peaks.truncate(REFINED_PEAKS);

    let grid_best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    peaks
        .into_iter()
        .map(|k| {
            let centre = k as f64 * step;
            golden_max(|t| objective(z, t), centre - step, centre + step)
        })
        .fold(grid_best, f64::max)
}

fn one_norm(z: &[C64; 4]) -> f64 {
    z.iter().map(|w| w.norm()).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerBoundCheck {
    /// `‖z‖_X ≥ ‖z‖₁/√2` up to `1e-9`.
    pub holds: bool,
    /// `‖z‖_X = ‖z‖₁/√2` within `1e-8`.
    pub equality: bool,
    /// `(arg z₁ + arg z₄) − (arg z₂ + arg z₃)` reduced to `[0, 2π)`.
    pub phase_gap: f64,
    pub x_norm: f64,
    pub one_norm: f64,
}

pub fn x_norm_lower_bound_check(z: &[C64; 4]) -> LowerBoundCheck {
    let xn = x_norm(z);
    let on = one_norm(z);
    let bound = on / SQRT_2;
    let gap = (z[0].arg() + z[3].arg()) - (z[1].arg() + z[2].arg());
    let mut phase_gap = gap.rem_euclid(TAU);
    if TAU - phase_gap < 1e-12 {
        phase_gap = 0.0;
    }
    LowerBoundCheck {
        holds: xn >= bound - BOUND_SLACK,
        equality: (xn - bound).abs() <= EQUALITY_TOL,
        phase_gap,
        x_norm: xn,
        one_norm: on,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockPositivity {
    pub block_positive: bool,
    /// `√(x₄y₄) = ‖z‖_X` within `1e-8`.
    pub equality: bool,
    pub sqrt_x4y4: f64,
    pub x_norm: f64,
}

/// Block-positivity of `W = X((0,0,0,x₄), (0,0,0,y₄), z)`: `√(x₄y₄) ≥ ‖z‖_X`.
pub fn block_positivity(x4: f64, y4: f64, z: &[C64; 4]) -> Result<BlockPositivity> {
    if x4 < 0.0 {
        return Err(Error::NonPositive { name: "x4", value: x4 });
    }
    if y4 < 0.0 {
        return Err(Error::NonPositive { name: "y4", value: y4 });
    }
    let lhs = (x4 * y4).sqrt();
    let xn = x_norm(z);
    Ok(BlockPositivity {
        block_positive: lhs >= xn - BOUND_SLACK,
        equality: (lhs - xn).abs() <= EQUALITY_TOL,
        sqrt_x4y4: lhs,
        x_norm: xn,
    })
}

pub fn is_block_positive_xwitness(x4: f64, y4: f64, z: &[C64; 4]) -> Result<bool> {
    Ok(block_positivity(x4, y4, z)?.block_positive)
}
