//! Newton's method for optimal quadratic dual quantizers on the line.
//!
//! The objective is [`exact_1d_dq_error`]. In compact mode the two endpoints
//! are pinned to the ends of the support and only interior points move; in
//! extended mode every point moves and the tails are charged the squared
//! distance to the nearest endpoint.

use crate::distributions::{DistributionSpec, Support};
use crate::error::{DqError, Result};
use crate::error_metrics::{check_covered, exact_1d_dq_error, ordered_scalars, Domain};
use crate::geometry::Grid;

pub use crate::linalg::Tridiagonal;

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonReport {
    pub grid: Grid,
    pub iterations: usize,
    pub final_gradient_norm: f64,
    pub converged: bool,
    /// Objective at the returned grid.
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { tol: 1e-10, max_iter: 100 }
    }
}

fn prepare(grid: &Grid, dist: &DistributionSpec, mode: Domain) -> Result<Vec<f64>> {
    let xs = ordered_scalars(grid)?;
    if !dist.has_analytics() {
        return Err(DqError::MissingAnalytics);
    }
    if xs.len() < 2 {
        return Err(DqError::InvalidArgument("need at least two grid points".into()));
    }
    if mode == Domain::Compact {
        check_covered(dist, xs[0], xs[xs.len() - 1])?;
    }
    Ok(xs)
}

fn gradient_of(xs: &[f64], dist: &DistributionSpec, mode: Domain) -> Result<Vec<f64>> {
    let n = xs.len();
    let mass = |a, b| dist.partial_moment(0, a, b);
    let first = |a, b| dist.partial_moment(1, a, b);
    let mut g = vec![0.0; n];
    for i in 1..n - 1 {
        let (l, x, r) = (xs[i - 1], xs[i], xs[i + 1]);
        g[i] = first(l, r)? - l * mass(l, x)? - r * mass(x, r)?;
    }
    if mode == Domain::Extended {
        let (a, b) = (xs[0], xs[1]);
        let tail = a * mass(f64::NEG_INFINITY, a)? - first(f64::NEG_INFINITY, a)?;
        g[0] = 2.0 * tail + first(a, b)? - b * mass(a, b)?;
        let (a, b) = (xs[n - 2], xs[n - 1]);
        let tail = b * mass(b, f64::INFINITY)? - first(b, f64::INFINITY)?;
        g[n - 1] = 2.0 * tail + first(a, b)? - a * mass(a, b)?;
    }
    Ok(g)
}

fn hessian_of(xs: &[f64], dist: &DistributionSpec, mode: Domain) -> Result<Tridiagonal> {
    let n = xs.len();
    let mut h = Tridiagonal::zeros(n);
    for i in 0..n - 1 {
        let off = -dist.partial_moment(0, xs[i], xs[i + 1])?;
        h.upper[i] = off;
        h.lower[i] = off;
    }
    for i in 0..n {
        let left = if i == 0 { xs[0] } else { xs[i - 1] };
        let right = if i + 1 == n { xs[n - 1] } else { xs[i + 1] };
        h.diag[i] = (right - left) * dist.pdf(xs[i])?;
    }
    match mode {
        Domain::Extended => {
            h.diag[0] += 2.0 * dist.partial_moment(0, f64::NEG_INFINITY, xs[0])?;
            h.diag[n - 1] += 2.0 * dist.partial_moment(0, xs[n - 1], f64::INFINITY)?;
        }
        Domain::Compact => {
            h.diag[0] = 0.0;
            h.diag[n - 1] = 0.0;
            h.upper[0] = 0.0;
            h.lower[n - 2] = 0.0;
        }
    }
    Ok(h)
}

/// Gradient of the exact 1D quadratic error in the grid coordinates.
/// Compact mode reports zeros at the pinned endpoints.
pub fn gradient_1d(grid: &Grid, dist: &DistributionSpec, mode: Domain) -> Result<Vec<f64>> {
    let xs = prepare(grid, dist, mode)?;
    gradient_of(&xs, dist, mode)
}

/// Jacobian of [`gradient_1d`]. In compact mode the endpoint rows are zero
/// and interior rows keep their coupling to the endpoints.
pub fn hessian_1d(grid: &Grid, dist: &DistributionSpec, mode: Domain) -> Result<Tridiagonal> {
    let xs = prepare(grid, dist, mode)?;
    hessian_of(&xs, dist, mode)
}

fn two_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Default starting grid: equidistant over the support (compact) or over the
/// central 10%–90% quantile range (extended).
pub fn initial_grid(dist: &DistributionSpec, n: usize, mode: Domain) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(DqError::InvalidArgument("need n >= 2".into()));
    }
    if !dist.has_analytics() {
        return Err(DqError::MissingAnalytics);
    }
    let (a, b) = match (mode, dist.support()) {
        (Domain::Compact, Support::Box { lo, hi }) => (lo[0], hi[0]),
        (Domain::Compact, Support::Unbounded) => return Err(DqError::UnboundedSupport),
        (Domain::Extended, _) => (dist.quantile(0.1)?, dist.quantile(0.9)?),
    };
    Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

/// Damped Newton iteration on the exact gradient.
///
/// A step that would break the ordering `x_1 < … < x_n` is halved until it
/// does not. In compact mode the endpoints of `init` are replaced by the
/// support endpoints.
pub fn newton_solve(
    dist: &DistributionSpec,
    n: usize,
    mode: Domain,
    init: Option<&[f64]>,
    opts: NewtonOptions,
) -> Result<NewtonReport> {
    let mut xs = match init {
        Some(v) if v.len() != n => return Err(DqError::DimensionMismatch { expected: n, got: v.len() }),
        Some(v) => v.to_vec(),
        None => initial_grid(dist, n, mode)?,
    };
    if mode == Domain::Compact {
        let ends = initial_grid(dist, 2, mode)?;
        xs[0] = ends[0];
        xs[n - 1] = ends[1];
    }
    let mut grid = Grid::from_scalars(&xs)?;
    prepare(&grid, dist, mode)?;

    let (lo, hi) = match mode {
        Domain::Compact => (1, n - 1),
        Domain::Extended => (0, n),
    };
    let mut iterations = 0;
    loop {
        let g = gradient_of(&xs, dist, mode)?;
        let mut gnorm = two_norm(&g);
        if gnorm <= opts.tol || lo >= hi {
            // one uncounted extra step: the Hessian is ill-conditioned for
            // large n, so a small gradient can still leave points ~1e-10 off
            if lo < hi {
                if let Ok(cand) = newton_step(&xs, &g, dist, mode, lo, hi) {
                    let cnorm = two_norm(&gradient_of(&cand, dist, mode)?);
                    if cnorm < gnorm {
                        xs = cand;
                        gnorm = cnorm;
                        grid = Grid::from_scalars(&xs)?;
                    }
                }
            }
            let error = exact_1d_dq_error(&grid, dist, mode)?;
            return Ok(NewtonReport { grid, iterations, final_gradient_norm: gnorm, converged: true, error });
        }
        if iterations == opts.max_iter {
            return Err(DqError::NotConverged { iterations, gradient_norm: gnorm });
        }
        xs = newton_step(&xs, &g, dist, mode, lo, hi)?;
        grid = Grid::from_scalars(&xs)?;
        iterations += 1;
    }
}

fn newton_step(
    xs: &[f64],
    g: &[f64],
    dist: &DistributionSpec,
    mode: Domain,
    lo: usize,
    hi: usize,
) -> Result<Vec<f64>> {
    let h = hessian_of(xs, dist, mode)?.block(lo, hi);
    let delta = h.solve(&g[lo..hi])?;
    let mut t = 1.0;
    loop {
        let mut cand = xs.to_vec();
        for (c, d) in cand[lo..hi].iter_mut().zip(&delta) {
            *c -= t * d;
        }
        if cand.windows(2).all(|w| w[0] < w[1]) && cand.iter().all(|c| c.is_finite()) {
            return Ok(cand);
        }
        t *= 0.5;
        if t < 1e-30 {
            return Err(DqError::Singular);
        }
    }
}
