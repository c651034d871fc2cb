//! Points, grids, norms and affine bases.
//!
//! A grid `Γ = {x_0, …, x_{n-1}}` lives in `R^d`. Affine bases are sets of
//! `d+1` grid indices whose extended matrix
//!
//! ```text
//!     A_I = [ x_i ... ]   (d coordinate rows)
//!           [  1  ... ]   (row of ones, last)
//! ```
//!
//! is invertible. Barycentric weights of a query `ξ` in a basis are
//! `λ_I = A_I^{-1} (ξ, 1)`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{DqError, Result};
use crate::linalg::Lu;

/// Relative pivot threshold for rank decisions on extended matrices.
pub const RANK_TOL: f64 = 1e-10;

/// A point of `R^d` with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(DqError::InvalidArgument("point must have dimension >= 1".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(DqError::NonFinite);
        }
        Ok(Point(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

/// Ordered collection of distinct points with a set of pinned (anchor) indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dim: usize,
    coords: Vec<f64>,
    pinned: BTreeSet<usize>,
}

impl Grid {
    pub fn new<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let dim = points
            .first()
            .map(|p| p.as_ref().len())
            .ok_or_else(|| DqError::InvalidArgument("grid must contain at least one point".into()))?;
        let mut coords = Vec::with_capacity(dim * points.len());
        for p in points {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(DqError::DimensionMismatch { expected: dim, got: p.len() });
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(dim, coords)
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.is_empty() || coords.len() % dim != 0 {
            return Err(DqError::InvalidArgument(format!(
                "{} coordinates cannot form points of dimension {dim}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(DqError::NonFinite);
        }
        let grid = Grid { dim, coords, pinned: BTreeSet::new() };
        grid.check_distinct()?;
        Ok(grid)
    }

    /// 1D convenience constructor.
    pub fn from_scalars(xs: &[f64]) -> Result<Self> {
        Self::from_flat(1, xs.to_vec())
    }

    pub fn with_pinned<I: IntoIterator<Item = usize>>(mut self, pinned: I) -> Result<Self> {
        let n = self.len();
        for i in pinned {
            if i >= n {
                return Err(DqError::IndexOutOfRange { index: i, len: n });
            }
            self.pinned.insert(i);
        }
        Ok(self)
    }

    fn check_distinct(&self) -> Result<()> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            self.point(a)
                .iter()
                .zip(self.point(b))
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        for w in order.windows(2) {
            if self.point(w[0]) == self.point(w[1]) {
                return Err(DqError::DuplicatePoint(w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn pinned(&self) -> &BTreeSet<usize> {
        &self.pinned
    }

    pub fn is_pinned(&self, i: usize) -> bool {
        self.pinned.contains(&i)
    }

    /// Mutable access to point `i`. Distinctness is not re-checked;
    /// optimizers call this in their inner loops.
    pub(crate) fn point_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn check_query(&self, xi: &[f64]) -> Result<()> {
        if xi.len() != self.dim {
            return Err(DqError::DimensionMismatch { expected: self.dim, got: xi.len() });
        }
        if xi.iter().any(|c| !c.is_finite()) {
            return Err(DqError::NonFinite);
        }
        Ok(())
    }

    pub fn max_abs_coord(&self) -> f64 {
        self.coords.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Affine dimension of the point set.
    pub fn affine_dim(&self) -> usize {
        let n = self.len();
        let rows = self.dim + 1;
        let mut a = vec![0.0; rows * n];
        for (j, p) in self.points().enumerate() {
            for (r, &c) in p.iter().enumerate() {
                a[r * n + j] = c;
            }
            a[self.dim * n + j] = 1.0;
        }
        crate::linalg::rank(&a, rows, n, RANK_TOL * (1.0 + self.max_abs_coord())) - 1
    }
}

/// Supported norms on `R^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    L1,
    L2,
    Linf,
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormKind::L1 => "l1",
            NormKind::L2 => "l2",
            NormKind::Linf => "linf",
        })
    }
}

impl std::str::FromStr for NormKind {
    type Err = DqError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(NormKind::L1),
            "l2" => Ok(NormKind::L2),
            "linf" => Ok(NormKind::Linf),
            other => Err(DqError::Parse(format!("unknown norm '{other}'"))),
        }
    }
}

/// A norm together with the exponent `p ≥ 1` of the cost `‖·‖^p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    pub kind: NormKind,
    pub p: f64,
}

impl NormSpec {
    pub fn new(kind: NormKind, p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(DqError::InvalidArgument(format!("exponent p must be >= 1, got {p}")));
        }
        Ok(NormSpec { kind, p })
    }

    /// Quadratic Euclidean case, `‖·‖₂²`.
    pub fn quadratic() -> Self {
        NormSpec { kind: NormKind::L2, p: 2.0 }
    }

    pub fn is_quadratic_euclidean(&self) -> bool {
        self.kind == NormKind::L2 && self.p == 2.0
    }

    /// `‖x‖^p`.
    pub fn cost(&self, x: &[f64]) -> f64 {
        norm_value(x, self)
    }

    /// `‖a − b‖^p` without allocating.
    pub fn dist_p(&self, a: &[f64], b: &[f64]) -> f64 {
        let n = match self.kind {
            NormKind::L1 => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            NormKind::L2 => {
                let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                if self.p == 2.0 {
                    return s;
                }
                s.sqrt()
            }
            NormKind::Linf => a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())),
        };
        powp(n, self.p)
    }
}

fn powp(r: f64, p: f64) -> f64 {
    if p == 1.0 {
        r
    } else if p == 2.0 {
        r * r
    } else {
        r.powf(p)
    }
}

/// The norm `‖x‖` itself (no exponent).
pub fn norm(x: &[f64], kind: NormKind) -> f64 {
    match kind {
        NormKind::L1 => x.iter().map(|c| c.abs()).sum(),
        NormKind::L2 => x.iter().map(|c| c * c).sum::<f64>().sqrt(),
        NormKind::Linf => x.iter().fold(0.0f64, |m, c| m.max(c.abs())),
    }
}

/// `‖x‖^p`.
pub fn norm_value(x: &[f64], spec: &NormSpec) -> f64 {
    if spec.kind == NormKind::L2 && spec.p == 2.0 {
        return x.iter().map(|c| c * c).sum();
    }
    powp(norm(x, spec.kind), spec.p)
}

/// Gradient of `x ↦ ‖x‖^p`. Fails where the map has a kink.
pub fn norm_p_gradient(x: &[f64], spec: &NormSpec) -> Result<Vec<f64>> {
    let p = spec.p;
    let r = norm(x, spec.kind);
    if r == 0.0 {
        // ‖x‖^p is differentiable at the origin only for p > 1.
        return if p > 1.0 { Ok(vec![0.0; x.len()]) } else { Err(DqError::NonSmooth) };
    }
    let scale = p * powp(r, p - 1.0);
    match spec.kind {
        NormKind::L2 => Ok(x.iter().map(|c| scale * c / r).collect()),
        NormKind::L1 => {
            if x.iter().any(|&c| c == 0.0) {
                return Err(DqError::NonSmooth);
            }
            Ok(x.iter().map(|c| scale * c.signum()).collect())
        }
        NormKind::Linf => {
            let hits: Vec<usize> = (0..x.len()).filter(|&i| x[i].abs() == r).collect();
            if hits.len() != 1 {
                return Err(DqError::NonSmooth);
            }
            let mut g = vec![0.0; x.len()];
            g[hits[0]] = scale * x[hits[0]].signum();
            Ok(g)
        }
    }
}

/// Largest pairwise distance `max ‖x_i − x_j‖`.
pub fn diameter(grid: &Grid, spec: &NormSpec) -> f64 {
    let mut best = 0.0f64;
    for i in 0..grid.len() {
        for j in (i + 1)..grid.len() {
            let diff: Vec<f64> = grid.point(i).iter().zip(grid.point(j)).map(|(a, b)| a - b).collect();
            best = best.max(norm(&diff, spec.kind));
        }
    }
    best
}

fn extended_matrix(grid: &Grid, indices: &[usize]) -> Vec<f64> {
    let m = grid.dim() + 1;
    let mut a = vec![0.0; m * m];
    for (col, &i) in indices.iter().enumerate() {
        for (row, &c) in grid.point(i).iter().enumerate() {
            a[row * m + col] = c;
        }
        a[grid.dim() * m + col] = 1.0;
    }
    a
}

fn basis_pivot_tol(grid: &Grid, indices: &[usize]) -> f64 {
    let mag = indices
        .iter()
        .flat_map(|&i| grid.point(i).iter())
        .fold(0.0f64, |m, c| m.max(c.abs()));
    RANK_TOL * (1.0 + mag)
}

fn check_indices(grid: &Grid, indices: &[usize]) -> Result<()> {
    if indices.len() != grid.dim() + 1 {
        return Err(DqError::InvalidBasis(format!(
            "expected {} indices, got {}",
            grid.dim() + 1,
            indices.len()
        )));
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= grid.len()) {
        return Err(DqError::IndexOutOfRange { index: bad, len: grid.len() });
    }
    Ok(())
}

/// Whether the indices form an affine basis of `R^d` (extended matrix of rank `d+1`).
pub fn is_affine_basis(grid: &Grid, indices: &[usize]) -> Result<bool> {
    check_indices(grid, indices)?;
    let a = extended_matrix(grid, indices);
    Ok(Lu::factor(&a, grid.dim() + 1, basis_pivot_tol(grid, indices)).is_ok())
}

/// `d+1` affinely independent grid indices with a cached factorization of `A_I`.
#[derive(Debug, Clone)]
pub struct AffineBasis {
    indices: Vec<usize>,
    lu: Lu,
}

impl AffineBasis {
    /// Indices are stored in ascending order.
    pub fn new(grid: &Grid, indices: &[usize]) -> Result<Self> {
        check_indices(grid, indices)?;
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(DqError::InvalidBasis("repeated index".into()));
        }
        let a = extended_matrix(grid, &sorted);
        let lu = Lu::factor(&a, grid.dim() + 1, basis_pivot_tol(grid, &sorted))
            .map_err(|_| DqError::InvalidBasis(format!("{sorted:?} is affinely dependent")))?;
        Ok(AffineBasis { indices: sorted, lu })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }
}

/// Barycentric weights `λ_I = A_I^{-1} (ξ, 1)`; entries may be negative.
pub fn barycentric_solve(basis: &AffineBasis, grid: &Grid, xi: &[f64]) -> Result<Vec<f64>> {
    grid.check_query(xi)?;
    if basis.lu.dim() != grid.dim() + 1 {
        return Err(DqError::Singular);
    }
    let mut b = xi.to_vec();
    b.push(1.0);
    let w = basis.lu.solve(&b);
    if w.iter().any(|v| !v.is_finite()) {
        return Err(DqError::Singular);
    }
    Ok(w)
}

/// Closed-hull membership via a phase-one feasibility LP.
pub fn in_convex_hull(grid: &Grid, xi: &[f64]) -> bool {
    if grid.check_query(xi).is_err() {
        return false;
    }
    crate::simplex::phase_one_feasible(grid, xi)
}

/// Circumcenter and circumradius of `d+1` affinely independent vertices
/// (Euclidean).
pub fn circumcenter<P: AsRef<[f64]>>(vertices: &[P]) -> Result<(Vec<f64>, f64)> {
    let d = vertices.first().map(|v| v.as_ref().len()).ok_or(DqError::Degenerate)?;
    if vertices.len() != d + 1 {
        return Err(DqError::InvalidArgument(format!(
            "circumcenter needs {} vertices in dimension {d}, got {}",
            d + 1,
            vertices.len()
        )));
    }
    let v0 = vertices[0].as_ref();
    // 2 (v_k − v_0) · w = ‖v_k − v_0‖², center z = v_0 + w
    let mut a = vec![0.0; d * d];
    let mut rhs = vec![0.0; d];
    let mut mag = 0.0f64;
    for k in 1..=d {
        let vk = vertices[k].as_ref();
        if vk.len() != d {
            return Err(DqError::DimensionMismatch { expected: d, got: vk.len() });
        }
        for j in 0..d {
            let e = vk[j] - v0[j];
            a[(k - 1) * d + j] = 2.0 * e;
            rhs[k - 1] += e * e;
            mag = mag.max(e.abs());
        }
    }
    if mag == 0.0 {
        return Err(DqError::Degenerate);
    }
    // pivot threshold relative to edge length
    let lu = Lu::factor(&a, d, 1e-8 * mag).map_err(|_| DqError::Degenerate)?;
    let w = lu.solve(&rhs);
    let z: Vec<f64> = v0.iter().zip(&w).map(|(a, b)| a + b).collect();
    let r = w.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !r.is_finite() {
        return Err(DqError::Degenerate);
    }
    Ok((z, r))
}
