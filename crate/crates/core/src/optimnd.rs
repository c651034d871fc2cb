//! Grid training in several dimensions.
//!
//! [`train`] runs the competitive learning loop: draw `ξ`, find its optimal
//! simplex, and pull each vertex `x_j` towards the circumcenter `z*` by
//! `α λ_j`. Samples outside the hull pull their nearest neighbour towards
//! `ξ` instead, which is the stochastic gradient of the extended functional
//! there. [`refine`] then takes a few preconditioned descent steps on a
//! fixed-seed Monte Carlo objective.
//!
//! In the plane with `‖·‖₂²` the Delaunay triangulation is rebuilt every
//! `retriangulate_every` steps. Between rebuilds a located triangle is used
//! only if it is still locally Delaunay for the current coordinates;
//! otherwise the step falls back to the linear program.

use serde::{Deserialize, Serialize};

use crate::delaunay2d::{self, Location, Triangulation};
use crate::distributions::{DistributionSpec, Support};
use crate::error::{DqError, Result};
use crate::error_metrics::{mc_dq_error_sharded, ErrorEstimate};
use crate::geometry::{norm_p_gradient, Grid, NormKind, NormSpec};
use crate::lp_core::{self, LocalSolution, LpOptions, Mode};
use crate::mc::{self, DEFAULT_SHARDS};
use crate::quantizer::{DualQuantizer, Resolved};
use crate::rng::RngStream;

/// Points fixed during training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Anchors {
    None,
    /// The `2^d` corners of the support box, stored first.
    Corners,
}

impl std::str::FromStr for Anchors {
    type Err = DqError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Anchors::None),
            "corners" => Ok(Anchors::Corners),
            other => Err(DqError::Parse(format!("unknown pin mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefineConfig {
    pub mc_samples: u64,
    pub descent_iters: usize,
}

impl Default for RefineConfig {
    fn default() -> Self {
        RefineConfig { mc_samples: 200_000, descent_iters: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub steps: u64,
    /// Step size `α_k = a / (b + k)`.
    pub a: f64,
    pub b: f64,
    pub seed: u64,
    pub anchors: Anchors,
    pub retriangulate_every: u64,
    pub refine: Option<RefineConfig>,
    /// Record a trace point every this many steps (0 disables the trace).
    pub trace_every: u64,
    pub eval_samples: u64,
    pub eval_seed: u64,
    pub spec: NormSpec,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            steps: 100_000,
            a: 1.0,
            b: 100.0,
            seed: 0,
            anchors: Anchors::None,
            retriangulate_every: 64,
            refine: None,
            trace_every: 0,
            eval_samples: 100_000,
            eval_seed: 1,
            spec: NormSpec::quadratic(),
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if !(self.a > 0.0) || !(self.b >= 1.0) {
            return Err(DqError::InvalidArgument("step schedule needs a > 0 and b >= 1".into()));
        }
        if self.retriangulate_every == 0 {
            return Err(DqError::InvalidArgument("retriangulate_every must be >= 1".into()));
        }
        Ok(())
    }

    pub fn step_size(&self, k: u64) -> f64 {
        self.a / (self.b + k as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub step: u64,
    pub estimate: ErrorEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub grid: Grid,
    pub error_trace: Vec<TracePoint>,
    pub outside_fraction: f64,
}

/// Optimal local solution for the current coordinates, `None` outside the
/// hull. `tri` may be stale.
fn local_solution(
    grid: &Grid,
    spec: &NormSpec,
    tri: Option<&Triangulation>,
    xi: &[f64],
    cursor: &mut usize,
) -> Result<Option<LocalSolution>> {
    if let Some(tri) = tri {
        if let Location::Triangle(t) = tri.locate(grid, xi, cursor) {
            if tri.is_locally_delaunay(grid, t) {
                return delaunay2d::solve_in_triangle(grid, tri, t, xi).map(Some);
            }
        }
    }
    match lp_core::solve_unchecked(grid, xi, spec, &LpOptions::default()) {
        Ok(s) => Ok(Some(s)),
        Err(DqError::Infeasible) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Half the per-sample gradient for vertex `x`: `λ (∇‖x − ξ‖^p − u1) / 2`.
fn half_gradient(x: &[f64], xi: &[f64], lambda: f64, u1: &[f64], spec: &NormSpec) -> Result<Vec<f64>> {
    if spec.is_quadratic_euclidean() {
        return Ok(x.iter().zip(xi).zip(u1).map(|((a, b), u)| lambda * (a - b - 0.5 * u)).collect());
    }
    let diff: Vec<f64> = x.iter().zip(xi).map(|(a, b)| a - b).collect();
    let g = norm_p_gradient(&diff, spec)?;
    Ok(g.iter().zip(u1).map(|(gk, u)| 0.5 * lambda * (gk - u)).collect())
}

/// One competitive learning update at sample `xi` with step `alpha`.
///
/// Inside the hull every unpinned basis vertex moves by
/// `−α λ_j (x_j − z*)` (for `‖·‖₂²`; other norms use half the per-sample
/// gradient). Outside, the nearest unpinned neighbour moves towards `xi`.
pub fn cvlq_step(
    grid: &mut Grid,
    xi: &[f64],
    alpha: f64,
    spec: &NormSpec,
    tri: Option<&Triangulation>,
    cursor: &mut usize,
) -> Result<Mode> {
    grid.check_query(xi)?;
    match local_solution(grid, spec, tri, xi, cursor)? {
        Some(sol) => {
            for (&j, &lam) in sol.basis.iter().zip(&sol.weights) {
                if grid.is_pinned(j) || lam == 0.0 {
                    continue;
                }
                let step = half_gradient(grid.point(j), xi, lam, &sol.u1, spec)?;
                for (c, s) in grid.point_mut(j).iter_mut().zip(step) {
                    *c -= alpha * s;
                }
            }
            Ok(Mode::Interior)
        }
        None => {
            let j = lp_core::nearest_index(grid, xi, spec);
            if !grid.is_pinned(j) {
                let zero = vec![0.0; xi.len()];
                let step = half_gradient(grid.point(j), xi, 1.0, &zero, spec)?;
                for (c, s) in grid.point_mut(j).iter_mut().zip(step) {
                    *c -= alpha * s;
                }
            }
            Ok(Mode::Exterior)
        }
    }
}

fn box_corners(lo: &[f64], hi: &[f64]) -> Vec<Vec<f64>> {
    let d = lo.len();
    (0..1usize << d)
        .map(|mask| (0..d).map(|j| if mask >> (d - 1 - j) & 1 == 1 { hi[j] } else { lo[j] }).collect())
        .collect()
}

fn init_from(dist: &DistributionSpec, n: usize, anchors: Anchors, rng: &mut RngStream) -> Result<Grid> {
    let d = dist.dim();
    if n < d + 1 {
        return Err(DqError::InvalidArgument(format!("need n >= {} points in dimension {d}", d + 1)));
    }
    let mut points = match anchors {
        Anchors::None => Vec::new(),
        Anchors::Corners => match dist.support() {
            Support::Box { lo, hi } => box_corners(&lo, &hi),
            Support::Unbounded => return Err(DqError::UnboundedSupport),
        },
    };
    let pinned = points.len();
    if pinned > n {
        return Err(DqError::InvalidArgument(format!("{pinned} anchors exceed n = {n}")));
    }
    while points.len() < n {
        points.push(dist.sample(rng));
    }
    let grid = Grid::new(&points)?.with_pinned(0..pinned)?;
    let adim = grid.affine_dim();
    if adim < d {
        return Err(DqError::FlatGrid { adim, dim: d });
    }
    Ok(grid)
}

/// The starting grid [`train`] uses for this configuration: anchors first,
/// then i.i.d. samples from the law.
pub fn initial_grid(dist: &DistributionSpec, n: usize, config: &TrainConfig) -> Result<Grid> {
    init_from(dist, n, config.anchors, &mut RngStream::new(config.seed))
}

fn uses_delaunay(grid: &Grid, spec: &NormSpec) -> bool {
    grid.dim() == 2 && spec.is_quadratic_euclidean()
}

fn trace_point(grid: &Grid, dist: &DistributionSpec, config: &TrainConfig, step: u64) -> Result<TracePoint> {
    let q = DualQuantizer::new(grid.clone(), config.spec)?;
    let mut rng = RngStream::new(config.eval_seed);
    let estimate = mc_dq_error_sharded(&q, dist, config.eval_samples, &mut rng, true, DEFAULT_SHARDS)?;
    Ok(TracePoint { step, estimate })
}

/// Train an `n`-point grid for `dist`. Deterministic for a fixed config.
pub fn train(dist: &DistributionSpec, n: usize, config: &TrainConfig) -> Result<TrainReport> {
    config.validate()?;
    let mut rng = RngStream::new(config.seed);
    let mut grid = init_from(dist, n, config.anchors, &mut rng)?;
    let spec = config.spec;
    let delaunay = uses_delaunay(&grid, &spec);
    let mut tri = if delaunay { delaunay2d::triangulate(&grid).ok() } else { None };
    let mut cursor = 0;
    let mut trace = Vec::new();
    if config.trace_every > 0 {
        trace.push(trace_point(&grid, dist, config, 0)?);
    }
    let mut xi = vec![0.0; grid.dim()];
    let mut outside = 0u64;
    for k in 0..config.steps {
        if delaunay && k > 0 && k % config.retriangulate_every == 0 {
            tri = delaunay2d::triangulate(&grid).ok();
            cursor = 0;
        }
        dist.sample_into(&mut rng, &mut xi);
        let mode = cvlq_step(&mut grid, &xi, config.step_size(k), &spec, tri.as_ref(), &mut cursor)?;
        if mode == Mode::Exterior {
            outside += 1;
        }
        if config.trace_every > 0 && (k + 1) % config.trace_every == 0 {
            trace.push(trace_point(&grid, dist, config, k + 1)?);
        }
    }
    if let Some(rc) = &config.refine {
        grid = refine(grid, dist, &spec, rc, config.eval_seed)?;
        if config.trace_every > 0 {
            trace.push(trace_point(&grid, dist, config, config.steps)?);
        }
    }
    let outside_fraction = if config.steps == 0 { 0.0 } else { outside as f64 / config.steps as f64 };
    Ok(TrainReport { grid, error_trace: trace, outside_fraction })
}

/// Monte Carlo gradient of `d_p^p` with respect to the grid coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct McGradient {
    /// Row-major `n × d`; pinned rows are zero.
    pub mean: Vec<f64>,
    pub std_error: Vec<f64>,
    /// `E λ_i(X)` (the cubature weights) from the same samples.
    pub weights: Vec<f64>,
    pub n_samples: u64,
}

fn check_smooth(spec: &NormSpec) -> Result<()> {
    if spec.kind == NormKind::L2 && spec.p >= 2.0 {
        Ok(())
    } else {
        Err(DqError::NonSmooth)
    }
}

/// Per-sample estimate of `E[λ_i(X)(∇‖X − x_i‖^p − u1(X))]`; with
/// `extended` the nearest neighbour of an outside sample gets
/// `∇‖x_nn − X‖^p`.
pub fn mc_gradient(
    grid: &Grid,
    dist: &DistributionSpec,
    spec: &NormSpec,
    n_samples: u64,
    rng: &mut RngStream,
    extended: bool,
) -> Result<McGradient> {
    check_smooth(spec)?;
    if grid.dim() != dist.dim() {
        return Err(DqError::DimensionMismatch { expected: grid.dim(), got: dist.dim() });
    }
    let q = DualQuantizer::new(grid.clone(), *spec)?;
    let (n, d) = (grid.len(), grid.dim());
    let est = mc::estimate_vec(n * d + n, n_samples, DEFAULT_SHARDS, rng, |r, st, out| {
        out.fill(0.0);
        let xi = dist.sample(r);
        let resolved = if extended {
            q.resolve(&xi, &mut st.cursor)?
        } else {
            match q.solve(&xi, &mut st.cursor) {
                Ok(s) => Resolved::Interior(s),
                Err(DqError::Infeasible) => return Err(DqError::SampleOutsideHull),
                Err(e) => return Err(e),
            }
        };
        let (basis, weights, u1) = match resolved {
            Resolved::Interior(s) => (s.basis, s.weights, s.u1),
            Resolved::Exterior { index, .. } => (vec![index], vec![1.0], vec![0.0; d]),
        };
        for (&i, &lam) in basis.iter().zip(&weights) {
            out[n * d + i] = lam;
            if grid.is_pinned(i) {
                continue;
            }
            let g = half_gradient(grid.point(i), &xi, lam, &u1, spec)?;
            for (o, gk) in out[i * d..(i + 1) * d].iter_mut().zip(g) {
                *o = 2.0 * gk;
            }
        }
        Ok(())
    })?;
    Ok(McGradient {
        mean: est[..n * d].iter().map(|e| e.value).collect(),
        std_error: est[..n * d].iter().map(|e| e.std_error).collect(),
        weights: est[n * d..].iter().map(|e| e.value).collect(),
        n_samples,
    })
}

/// Fraction of sampled queries at which the local program is degenerate.
pub fn degenerate_fraction(
    grid: &Grid,
    dist: &DistributionSpec,
    spec: &NormSpec,
    n_samples: u64,
    rng: &mut RngStream,
) -> Result<f64> {
    let mut bad = 0u64;
    let mut seen = 0u64;
    for _ in 0..n_samples {
        let xi = dist.sample(rng);
        match lp_core::is_nondegenerate(grid, &xi, spec) {
            Ok(ok) => {
                seen += 1;
                bad += u64::from(!ok);
            }
            Err(DqError::Infeasible) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(if seen == 0 { 0.0 } else { bad as f64 / seen as f64 })
}

/// Preconditioned descent on the extended MC objective with a fixed seed.
///
/// The step for point `i` is `−g_i / (2 E λ_i)`, which is the Lloyd-type
/// fixed-point move in the quadratic case. Steps are halved until the
/// fixed-seed objective decreases; the loop stops when none does.
pub fn refine(
    grid: Grid,
    dist: &DistributionSpec,
    spec: &NormSpec,
    config: &RefineConfig,
    seed: u64,
) -> Result<Grid> {
    if config.descent_iters == 0 {
        return Ok(grid);
    }
    check_smooth(spec)?;
    let objective = |g: &Grid| -> Result<f64> {
        let q = DualQuantizer::new(g.clone(), *spec)?;
        Ok(mc_dq_error_sharded(&q, dist, config.mc_samples, &mut RngStream::new(seed), true, DEFAULT_SHARDS)?.value)
    };
    let d = grid.dim();
    let mut grid = grid;
    let mut current = objective(&grid)?;
    for _ in 0..config.descent_iters {
        let grad = mc_gradient(&grid, dist, spec, config.mc_samples, &mut RngStream::new(seed ^ 0x5eed), true)?;
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let mut cand = grid.clone();
            for i in 0..grid.len() {
                let w = grad.weights[i];
                if grid.is_pinned(i) || w <= 0.0 {
                    continue;
                }
                for (k, c) in cand.point_mut(i).iter_mut().enumerate() {
                    *c -= t * grad.mean[i * d + k] / (2.0 * w);
                }
            }
            if let Ok(v) = Grid::from_flat(d, cand.coords().to_vec()).and_then(|_| objective(&cand)) {
                if v < current {
                    grid = cand;
                    current = v;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok(grid)
}
