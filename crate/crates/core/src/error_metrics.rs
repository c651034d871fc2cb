//! Dual and Voronoi quantization errors, product grids, bounds and rates.
//!
//! Values returned here are `p`-th powers (`d_p^p`, `e_p^p`), which is what
//! Monte Carlo estimates and what the closed forms produce.

use serde::{Deserialize, Serialize};

use crate::distributions::{DistributionSpec, Support};
use crate::error::{DqError, Result};
use crate::geometry::{Grid, NormKind, NormSpec};
use crate::lp_core;
use crate::mc::{self, DEFAULT_SHARDS};
use crate::quantizer::DualQuantizer;
use crate::rng::RngStream;

pub use crate::mc::ErrorEstimate;

/// Whether the law must live inside the grid hull or is handled by the
/// nearest-neighbour extension outside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Compact,
    Extended,
}

impl std::str::FromStr for Domain {
    type Err = DqError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "compact" => Ok(Domain::Compact),
            "extended" => Ok(Domain::Extended),
            other => Err(DqError::Parse(format!("unknown mode '{other}'"))),
        }
    }
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Domain::Compact => "compact",
            Domain::Extended => "extended",
        })
    }
}

fn check_dims(grid: &Grid, dist: &DistributionSpec) -> Result<()> {
    if grid.dim() != dist.dim() {
        return Err(DqError::DimensionMismatch { expected: grid.dim(), got: dist.dim() });
    }
    Ok(())
}

/// Monte Carlo estimate of `E F^p(X; Γ)` or of its extension.
pub fn mc_dq_error(
    q: &DualQuantizer,
    dist: &DistributionSpec,
    n_samples: u64,
    rng: &mut RngStream,
    extended: bool,
) -> Result<ErrorEstimate> {
    mc_dq_error_sharded(q, dist, n_samples, rng, extended, DEFAULT_SHARDS)
}

pub fn mc_dq_error_sharded(
    q: &DualQuantizer,
    dist: &DistributionSpec,
    n_samples: u64,
    rng: &mut RngStream,
    extended: bool,
    shards: usize,
) -> Result<ErrorEstimate> {
    check_dims(q.grid(), dist)?;
    mc::estimate(n_samples, shards, rng, |r, st| {
        let xi = dist.sample(r);
        match q.value(&xi, extended, &mut st.cursor) {
            Err(DqError::Infeasible) => Err(DqError::SampleOutsideHull),
            v => v,
        }
    })
}

/// Monte Carlo estimate of the Voronoi error `E min_i ‖X − x_i‖^p`.
pub fn mc_voronoi_error(
    grid: &Grid,
    dist: &DistributionSpec,
    spec: &NormSpec,
    n_samples: u64,
    rng: &mut RngStream,
) -> Result<ErrorEstimate> {
    check_dims(grid, dist)?;
    mc::estimate(n_samples, DEFAULT_SHARDS, rng, |r, _| {
        let xi = dist.sample(r);
        let i = lp_core::nearest_index(grid, &xi, spec);
        Ok(spec.dist_p(&xi, grid.point(i)))
    })
}

/// Coordinates of a one-dimensional grid, required strictly increasing.
pub(crate) fn ordered_scalars(grid: &Grid) -> Result<Vec<f64>> {
    if grid.dim() != 1 {
        return Err(DqError::DimensionMismatch { expected: 1, got: grid.dim() });
    }
    let xs = grid.coords().to_vec();
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(DqError::Unordered);
    }
    Ok(xs)
}

/// Compact mode needs the whole mass inside `[x_1, x_n]`.
pub(crate) fn check_covered(dist: &DistributionSpec, first: f64, last: f64) -> Result<()> {
    match dist.support() {
        Support::Box { lo, hi } if lo[0] >= first && hi[0] <= last => Ok(()),
        _ => Err(DqError::SupportNotCovered),
    }
}

/// `∫_a^b (ξ − a)(b − ξ) P(dξ)`.
pub(crate) fn cell_dq(dist: &DistributionSpec, a: f64, b: f64) -> Result<f64> {
    let m0 = dist.partial_moment(0, a, b)?;
    let m1 = dist.partial_moment(1, a, b)?;
    let m2 = dist.partial_moment(2, a, b)?;
    Ok(-a * b * m0 + (a + b) * m1 - m2)
}

/// `∫_a^b (ξ − x)² P(dξ)`, `a`, `b` possibly infinite.
pub(crate) fn squared_dev(dist: &DistributionSpec, x: f64, a: f64, b: f64) -> Result<f64> {
    let m0 = dist.partial_moment(0, a, b)?;
    let m1 = dist.partial_moment(1, a, b)?;
    let m2 = dist.partial_moment(2, a, b)?;
    Ok((x * x * m0 - 2.0 * x * m1 + m2).max(0.0))
}

/// Exact `d_2^2` in dimension one from partial moments.
///
/// Each cell contributes `∫ (ξ − x_i)(x_{i+1} − ξ) dP`; in extended mode the
/// tails add the squared distance to the nearest endpoint.
pub fn exact_1d_dq_error(grid: &Grid, dist: &DistributionSpec, domain: Domain) -> Result<f64> {
    let xs = ordered_scalars(grid)?;
    if !dist.has_analytics() {
        return Err(DqError::MissingAnalytics);
    }
    let (first, last) = (xs[0], xs[xs.len() - 1]);
    if domain == Domain::Compact {
        check_covered(dist, first, last)?;
    }
    let mut total = 0.0;
    for w in xs.windows(2) {
        total += cell_dq(dist, w[0], w[1])?;
    }
    if domain == Domain::Extended {
        total += squared_dev(dist, first, f64::NEG_INFINITY, first)?;
        total += squared_dev(dist, last, last, f64::INFINITY)?;
    }
    Ok(total)
}

/// Exact Voronoi `e_2^2` in dimension one, midpoint cell boundaries.
pub fn exact_1d_voronoi_error(grid: &Grid, dist: &DistributionSpec) -> Result<f64> {
    let xs = ordered_scalars(grid)?;
    if !dist.has_analytics() {
        return Err(DqError::MissingAnalytics);
    }
    let n = xs.len();
    let mut total = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let a = if i == 0 { f64::NEG_INFINITY } else { 0.5 * (xs[i - 1] + x) };
        let b = if i + 1 == n { f64::INFINITY } else { 0.5 * (x + xs[i + 1]) };
        total += squared_dev(dist, x, a, b)?;
    }
    Ok(total)
}

/// Optimal dual grid `(i − 1)/(n − 1)` for `U([0,1])` and its error
/// `2/((p+1)(p+2)) (n−1)^{−p}`.
pub fn theoretical_1d_uniform(n: usize, p: f64) -> Result<(Grid, f64)> {
    if n < 2 || !(p >= 1.0) {
        return Err(DqError::InvalidArgument("need n >= 2 and p >= 1".into()));
    }
    let m = (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| i as f64 / m).collect();
    let err = 2.0 / ((p + 1.0) * (p + 2.0)) * m.powf(-p);
    Ok((Grid::from_scalars(&xs)?, err))
}

/// Optimal Voronoi grid `(2i − 1)/(2n)` for `U([0,1])` and its error
/// `n^{−p} / (2^p (p+1))`.
pub fn voronoi_uniform_optimum(n: usize, p: f64) -> Result<(Grid, f64)> {
    if n < 1 || !(p >= 1.0) {
        return Err(DqError::InvalidArgument("need n >= 1 and p >= 1".into()));
    }
    let nf = n as f64;
    let xs: Vec<f64> = (1..=n).map(|i| (2 * i - 1) as f64 / (2.0 * nf)).collect();
    let err = nf.powf(-p) / (2f64.powf(p) * (p + 1.0));
    Ok((Grid::from_scalars(&xs)?, err))
}

/// Regular grid with `m + 1` points per axis on the box `[lo, hi]`; the last
/// axis varies fastest.
pub fn product_grid(lo: &[f64], hi: &[f64], m: usize) -> Result<Grid> {
    if m == 0 {
        return Err(DqError::InvalidArgument("m must be >= 1".into()));
    }
    if lo.is_empty() || lo.len() != hi.len() || lo.iter().zip(hi).any(|(a, b)| !(a < b)) {
        return Err(DqError::InvalidArgument("invalid box".into()));
    }
    let d = lo.len();
    let per_axis = m + 1;
    let total = per_axis.pow(d as u32);
    let mut coords = Vec::with_capacity(total * d);
    for idx in 0..total {
        let mut rem = idx;
        let mut point = vec![0.0; d];
        for j in (0..d).rev() {
            let i = rem % per_axis;
            rem /= per_axis;
            point[j] = if i == m { hi[j] } else { lo[j] + (hi[j] - lo[j]) * i as f64 / m as f64 };
        }
        coords.extend(point);
    }
    Grid::from_flat(d, coords)
}

/// `max_i ((x_{i+1} − x_i)/2)^p`, an upper bound for `F^p` on `[x_1, x_n]`.
pub fn scalar_bound(grid: &Grid, p: f64) -> Result<f64> {
    let xs = ordered_scalars(grid)?;
    Ok(xs.windows(2).map(|w| (0.5 * (w[1] - w[0])).powf(p)).fold(0.0, f64::max))
}

/// `sup_{|x|_p = 1} ‖x‖^p` on `R^d`.
///
/// | norm | `p ≤ q` | `p > q` |
/// |------|---------|---------|
/// | `l_q` | 1 | `d^{p/q − 1}` |
///
/// with `q = 1, 2, ∞` for `l1`, `l2`, `linf` (so `linf` is always 1).
pub fn norm_constant(kind: NormKind, p: f64, d: usize) -> f64 {
    let q = match kind {
        NormKind::L1 => 1.0,
        NormKind::L2 => 2.0,
        NormKind::Linf => return 1.0,
    };
    if q >= p {
        1.0
    } else {
        (d as f64).powf(p / q - 1.0)
    }
}

/// `d · C · (ℓ/2)^p · m^{−p}`, an upper bound for `F^p` over a cube of edge
/// `ℓ` carrying the product grid with `m + 1` points per axis.
pub fn product_bound(d: usize, ell: f64, m: usize, spec: &NormSpec) -> f64 {
    let p = spec.p;
    d as f64 * norm_constant(spec.kind, p, d) * (0.5 * ell).powf(p) * (m as f64).powf(-p)
}

/// Least-squares slope of `log(error^{1/p})` against `log(size)`.
pub fn rate_fit(sizes: &[f64], errors: &[f64], p: f64) -> Result<f64> {
    if sizes.len() != errors.len() || sizes.len() < 3 {
        return Err(DqError::InvalidArgument("rate fit needs >= 3 matching points".into()));
    }
    if sizes.iter().chain(errors).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(DqError::InvalidArgument("rate fit needs positive finite values".into()));
    }
    let xs: Vec<f64> = sizes.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln() / p).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(DqError::InvalidArgument("all sizes are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}
