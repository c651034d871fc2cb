//! The random splitting operator and its companion interpolation operator.
//!
//! Given `ξ ∈ conv(Γ)` with optimal basis `I` and weights `λ_I`, the splitting
//! operator returns vertex `x_i`, `i ∈ I`, with probability `λ_i`. Since
//! `Σ λ_i x_i = ξ` the conditional mean of the outcome is `ξ` for every grid,
//! not just optimal ones. Outside the hull the extended operator falls back
//! to the nearest neighbour.
//!
//! The vertex is selected by inverse-cdf on the cumulative weights, taken in
//! ascending grid-index order, from a single uniform draw.

use crate::error::Result;
use crate::geometry::{Grid, NormSpec};
use crate::lp_core::{self, LocalSolution, Mode};
use crate::quantizer::{DualQuantizer, Resolved};

pub use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq)]
pub struct SplitOutcome {
    pub vertex: usize,
    pub basis: Vec<usize>,
    pub weights: Vec<f64>,
    pub mode: Mode,
}

/// Nearest grid index (ties → smallest index).
pub fn nn_project(grid: &Grid, xi: &[f64], spec: &NormSpec) -> usize {
    lp_core::nearest_index(grid, xi, spec)
}

/// Index into `weights` selected by `u ∈ [0, 1)`.
pub fn select_vertex(weights: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (k, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        last_positive = k;
        acc += w;
        if u < acc {
            return k;
        }
    }
    // rounding left u past the final partial sum
    last_positive
}

fn outcome_from(sol: LocalSolution, u: f64) -> SplitOutcome {
    let k = select_vertex(&sol.weights, u);
    SplitOutcome { vertex: sol.basis[k], basis: sol.basis, weights: sol.weights, mode: Mode::Interior }
}

/// One draw of the splitting operator at `xi`. Fails outside the hull.
pub fn split(
    q: &DualQuantizer,
    xi: &[f64],
    rng: &mut RngStream,
    cursor: &mut usize,
) -> Result<SplitOutcome> {
    let sol = q.solve(xi, cursor)?;
    Ok(outcome_from(sol, rng.uniform()))
}

/// Total version of [`split`]: nearest neighbour outside the hull.
///
/// One uniform is consumed per call in both modes so that the stream stays
/// aligned regardless of where samples fall.
pub fn split_extended(
    q: &DualQuantizer,
    xi: &[f64],
    rng: &mut RngStream,
    cursor: &mut usize,
) -> Result<SplitOutcome> {
    let u = rng.uniform();
    match q.resolve(xi, cursor)? {
        Resolved::Interior(sol) => Ok(outcome_from(sol, u)),
        Resolved::Exterior { index, .. } => Ok(SplitOutcome {
            vertex: index,
            basis: vec![index],
            weights: vec![1.0],
            mode: Mode::Exterior,
        }),
    }
}

/// `Σ_{i∈I} λ_i F(x_i)`, the conditional expectation of `F` at the split of `xi`.
pub fn interpolate<F>(q: &DualQuantizer, f: F, xi: &[f64], cursor: &mut usize) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let sol = q.solve(xi, cursor)?;
    Ok(sol.basis.iter().zip(&sol.weights).map(|(&i, &w)| w * f(q.grid().point(i))).sum())
}
