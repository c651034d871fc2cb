//! The local dual quantization functional as a linear program.
//!
//! For a grid `Γ` and a query `ξ ∈ conv(Γ)`,
//!
//! ```text
//!     F^p(ξ; Γ) = min { Σ_j λ_j ‖ξ − x_j‖^p : λ ≥ 0, Σ_j λ_j x_j = ξ, Σ_j λ_j = 1 }
//! ```
//!
//! and its dual is `max { u1·ξ + u2 : u1·x_j + u2 ≤ ‖ξ − x_j‖^p for all j }`.
//! [`local_dq_solve`] returns an optimal basic solution together with the dual
//! pair. When several bases are optimal the lexicographically smallest one
//! (among those complementary to the terminal dual) is returned, so repeated
//! queries always select the same simplex.

use serde::{Deserialize, Serialize};

use crate::error::{DqError, Result};
use crate::geometry::{barycentric_solve, AffineBasis, Grid, NormSpec};
use crate::simplex;

/// Relative tolerance knob for feasibility and optimality tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpOptions {
    pub rel_tol: f64,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions { rel_tol: 1e-9 }
    }
}

/// Optimal basic solution of the local program.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSolution {
    /// Ascending grid indices of the optimal basis `I`.
    pub basis: Vec<usize>,
    /// Barycentric weights aligned with `basis`.
    pub weights: Vec<f64>,
    pub u1: Vec<f64>,
    pub u2: f64,
    /// `F^p(ξ; Γ)`.
    pub value: f64,
}

impl LocalSolution {
    /// `u1·ξ + u2`, the dual objective.
    pub fn dual_value(&self, xi: &[f64]) -> f64 {
        self.u1.iter().zip(xi).map(|(a, b)| a * b).sum::<f64>() + self.u2
    }

    /// Weight attached to grid index `i` (zero when `i` is not in the basis).
    pub fn weight_of(&self, i: usize) -> f64 {
        self.basis.iter().position(|&j| j == i).map_or(0.0, |k| self.weights[k])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Interior,
    Exterior,
}

/// Value of the extended functional: the LP value inside the hull, the
/// nearest-neighbour distance to the power `p` outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedValue {
    pub value: f64,
    pub mode: Mode,
}

/// `‖ξ − x_j‖^p` for every grid point.
pub fn cost_vector(grid: &Grid, xi: &[f64], spec: &NormSpec) -> Vec<f64> {
    grid.points().map(|x| spec.dist_p(xi, x)).collect()
}

pub(crate) fn check_full_dim(grid: &Grid) -> Result<()> {
    let adim = grid.affine_dim();
    if adim < grid.dim() {
        return Err(DqError::FlatGrid { adim, dim: grid.dim() });
    }
    Ok(())
}

/// Solve without re-checking the affine dimension of the grid.
pub(crate) fn solve_unchecked(
    grid: &Grid,
    xi: &[f64],
    spec: &NormSpec,
    opts: &LpOptions,
) -> Result<LocalSolution> {
    let costs = cost_vector(grid, xi, spec);
    let out = simplex::solve(grid, xi, &costs, opts.rel_tol)?;
    let d = grid.dim();
    Ok(LocalSolution {
        basis: out.basis,
        weights: out.weights,
        u1: out.dual[..d].to_vec(),
        u2: out.dual[d],
        value: out.value,
    })
}

pub fn local_dq_solve(grid: &Grid, xi: &[f64], spec: &NormSpec) -> Result<LocalSolution> {
    local_dq_solve_with(grid, xi, spec, &LpOptions::default())
}

pub fn local_dq_solve_with(
    grid: &Grid,
    xi: &[f64],
    spec: &NormSpec,
    opts: &LpOptions,
) -> Result<LocalSolution> {
    grid.check_query(xi)?;
    check_full_dim(grid)?;
    solve_unchecked(grid, xi, spec, opts)
}

/// `F^p(ξ; Γ)`.
pub fn local_dq_value(grid: &Grid, xi: &[f64], spec: &NormSpec) -> Result<f64> {
    local_dq_solve(grid, xi, spec).map(|s| s.value)
}

/// Nearest grid index; ties go to the smallest index.
pub fn nearest_index(grid: &Grid, xi: &[f64], spec: &NormSpec) -> usize {
    let mut best = (0usize, f64::INFINITY);
    for (i, x) in grid.points().enumerate() {
        let c = spec.dist_p(xi, x);
        if c < best.1 {
            best = (i, c);
        }
    }
    best.0
}

/// Extended functional, total on `R^d`.
pub fn local_dq_value_extended(grid: &Grid, xi: &[f64], spec: &NormSpec) -> Result<ExtendedValue> {
    match local_dq_solve(grid, xi, spec) {
        Ok(s) => Ok(ExtendedValue { value: s.value, mode: Mode::Interior }),
        Err(DqError::Infeasible) => {
            let i = nearest_index(grid, xi, spec);
            Ok(ExtendedValue { value: spec.dist_p(xi, grid.point(i)), mode: Mode::Exterior })
        }
        Err(e) => Err(e),
    }
}

/// Brute-force minimum over every feasible basis. Independent of the simplex
/// solver; used as a reference.
pub fn enumerate_bases_oracle(grid: &Grid, xi: &[f64], spec: &NormSpec) -> Result<f64> {
    grid.check_query(xi)?;
    let (n, m) = (grid.len(), grid.dim() + 1);
    if n < m {
        return Err(DqError::FlatGrid { adim: grid.affine_dim(), dim: grid.dim() });
    }
    let count = binomial(n as u128, m as u128);
    if count > 1_000_000 {
        return Err(DqError::BudgetExceeded(count));
    }
    let costs = cost_vector(grid, xi, spec);
    let scale = xi.iter().fold(grid.max_abs_coord(), |a, c| a.max(c.abs()));
    let tol = 1e-9 * (1.0 + scale);
    let mut best: Option<f64> = None;
    let mut pick: Vec<usize> = (0..m).collect();
    loop {
        if let Ok(basis) = AffineBasis::new(grid, &pick) {
            let w = barycentric_solve(&basis, grid, xi)?;
            if w.iter().all(|&v| v >= -tol) {
                let v: f64 = w.iter().zip(&pick).map(|(l, &j)| l * costs[j]).sum();
                best = Some(best.map_or(v, |b: f64| b.min(v)));
            }
        }
        if !simplex::next_combination(&mut pick, n) {
            break;
        }
    }
    best.ok_or(DqError::Infeasible)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Whether `ξ` lies in the optimality region `D_I` of the basis `I`.
pub fn optimality_region_contains(
    grid: &Grid,
    indices: &[usize],
    xi: &[f64],
    spec: &NormSpec,
) -> Result<bool> {
    let basis = AffineBasis::new(grid, indices)?;
    let w = barycentric_solve(&basis, grid, xi)?;
    let costs = cost_vector(grid, xi, spec);
    let scale = xi.iter().fold(grid.max_abs_coord(), |a, c| a.max(c.abs()));
    let tol = 1e-9 * (1.0 + scale);
    if w.iter().any(|&v| v < -tol) {
        return Ok(false);
    }
    let v: f64 = w.iter().zip(basis.indices()).map(|(l, &j)| l * costs[j]).sum();
    let best = local_dq_value(grid, xi, spec)?;
    Ok(v <= best + tol * (1.0 + best))
}

/// Non-degeneracy of `ξ`: every non-basic dual constraint is strictly slack.
pub fn is_nondegenerate(grid: &Grid, xi: &[f64], spec: &NormSpec) -> Result<bool> {
    let sol = local_dq_solve(grid, xi, spec)?;
    Ok(min_dual_slack(grid, xi, spec, &sol) > nondegeneracy_tol(grid, xi, &sol))
}

pub(crate) fn nondegeneracy_tol(grid: &Grid, xi: &[f64], sol: &LocalSolution) -> f64 {
    let scale = xi.iter().fold(grid.max_abs_coord(), |a, c| a.max(c.abs())).max(sol.value);
    1e-9 * (1.0 + scale)
}

/// `min_{j ∉ I} (c_j − u1·x_j − u2)`, `+∞` when every index is basic.
pub(crate) fn min_dual_slack(grid: &Grid, xi: &[f64], spec: &NormSpec, sol: &LocalSolution) -> f64 {
    grid.points()
        .enumerate()
        .filter(|(j, _)| !sol.basis.contains(j))
        .map(|(_, x)| {
            let lhs: f64 = sol.u1.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + sol.u2;
            spec.dist_p(xi, x) - lhs
        })
        .fold(f64::INFINITY, f64::min)
}
