//! Cubature with dual quantization weights.
//!
//! `p_i = P(J*_Γ(X) = x_i)` turns a grid into the cubature rule
//! `E F(X) ≈ Σ p_i F(x_i)`. Because the splitting operator is stationary the
//! rule is exact for affine `F` and its error for `F` with a Lipschitz
//! differential is at most `[F']_Lip · E‖X − J*_Γ(X)‖²`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::distributions::{DistributionSpec, Support};
use crate::error::{DqError, Result};
use crate::error_metrics::{check_covered, ordered_scalars, Domain};
use crate::geometry::Grid;
use crate::mc::{self, DEFAULT_SHARDS};
use crate::quantizer::DualQuantizer;
use crate::rng::RngStream;
use crate::splitting;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    pub grid: Grid,
    pub weights: Vec<f64>,
    /// Per-weight standard errors; zero for exact tables.
    pub std_error: Vec<f64>,
    pub n_samples: u64,
    pub seed: u64,
}

impl WeightTable {
    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Empirical frequencies of the splitting outcomes of `n_samples` draws.
pub fn weights(
    q: &DualQuantizer,
    dist: &DistributionSpec,
    n_samples: u64,
    rng: &mut RngStream,
    extended: bool,
) -> Result<WeightTable> {
    let grid = q.grid();
    if grid.dim() != dist.dim() {
        return Err(DqError::DimensionMismatch { expected: grid.dim(), got: dist.dim() });
    }
    let seed = rng.seed();
    let n = grid.len();
    let est = mc::estimate_vec(n, n_samples, DEFAULT_SHARDS, rng, |r, st, out| {
        out.fill(0.0);
        let xi = dist.sample(r);
        let o = if extended {
            splitting::split_extended(q, &xi, r, &mut st.cursor)?
        } else {
            match splitting::split(q, &xi, r, &mut st.cursor) {
                Err(DqError::Infeasible) => return Err(DqError::SampleOutsideHull),
                o => o?,
            }
        };
        out[o.vertex] = 1.0;
        Ok(())
    })?;
    let mut w: Vec<f64> = est.iter().map(|e| e.value).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= total);
    Ok(WeightTable {
        grid: grid.clone(),
        weights: w,
        std_error: est.iter().map(|e| e.std_error).collect(),
        n_samples,
        seed,
    })
}

/// Exact weights on the line: integrals of the hat functions, plus the tail
/// masses at the endpoints in extended mode.
pub fn exact_weights_1d(grid: &Grid, dist: &DistributionSpec, domain: Domain) -> Result<WeightTable> {
    let xs = ordered_scalars(grid)?;
    if !dist.has_analytics() {
        return Err(DqError::MissingAnalytics);
    }
    let n = xs.len();
    if domain == Domain::Compact {
        check_covered(dist, xs[0], xs[n - 1])?;
    }
    let mut w = vec![0.0; n];
    for i in 0..n - 1 {
        let (a, b) = (xs[i], xs[i + 1]);
        let m0 = dist.partial_moment(0, a, b)?;
        let m1 = dist.partial_moment(1, a, b)?;
        w[i] += (b * m0 - m1) / (b - a);
        w[i + 1] += (m1 - a * m0) / (b - a);
    }
    if domain == Domain::Extended {
        w[0] += dist.partial_moment(0, f64::NEG_INFINITY, xs[0])?;
        w[n - 1] += dist.partial_moment(0, xs[n - 1], f64::INFINITY)?;
    }
    Ok(WeightTable { grid: grid.clone(), weights: w, std_error: vec![0.0; n], n_samples: 0, seed: 0 })
}

/// `Σ p_i F(x_i)`.
pub fn expect<F: Fn(&[f64]) -> f64>(table: &WeightTable, f: F) -> f64 {
    table.grid.points().zip(&table.weights).map(|(x, &p)| p * f(x)).sum()
}

/// Separable test integrands `F(x) = Σ_k f(x_k)`.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// `f(t) = t²`.
    Quadratic,
    /// `f(t) = e^t`.
    Exp,
    /// `f(t) = cos t`.
    Cos,
    /// `f(t) = Σ c_k t^k`.
    Poly(Vec<f64>),
}

impl TestFunction {
    fn scalar(&self, t: f64) -> f64 {
        match self {
            TestFunction::Quadratic => t * t,
            TestFunction::Exp => t.exp(),
            TestFunction::Cos => t.cos(),
            TestFunction::Poly(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * t + ck),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        x.iter().map(|&t| self.scalar(t)).sum()
    }

    /// Lipschitz constant of `∇F` (`sup |f''|`) over the support, when finite.
    pub fn gradient_lipschitz(&self, support: &Support) -> Option<f64> {
        let radius = |s: &Support| match s {
            Support::Box { lo, hi } => Some(lo.iter().chain(hi).fold(0.0f64, |m, v| m.max(v.abs()))),
            Support::Unbounded => None,
        };
        match self {
            TestFunction::Quadratic => Some(2.0),
            TestFunction::Cos => Some(1.0),
            TestFunction::Exp => match support {
                Support::Box { hi, .. } => Some(hi.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v)).exp()),
                Support::Unbounded => None,
            },
            TestFunction::Poly(c) => {
                let r = radius(support)?;
                Some(c.iter().enumerate().skip(2).map(|(k, ck)| (k * (k - 1)) as f64 * ck.abs() * r.powi(k as i32 - 2)).sum())
            }
        }
    }

    /// `quadratic`, `exp`, `cos`, or `poly:c0,c1,…`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "quadratic" => Ok(TestFunction::Quadratic),
            None if s == "exp" => Ok(TestFunction::Exp),
            None if s == "cos" => Ok(TestFunction::Cos),
            Some(("poly", args)) => {
                let c = args
                    .split(',')
                    .map(|t| t.trim().parse::<f64>().map_err(|e| DqError::Parse(format!("{t}: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(TestFunction::Poly(c))
            }
            _ => Err(DqError::Parse(format!("unknown function '{s}'"))),
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Quadratic => f.write_str("quadratic"),
            TestFunction::Exp => f.write_str("exp"),
            TestFunction::Cos => f.write_str("cos"),
            TestFunction::Poly(c) => {
                let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondOrderReport {
    /// `E F(X) − E F(J*(X))`.
    pub cubature_error: f64,
    pub cubature_std_error: f64,
    /// `[F']_Lip · E‖X − J*(X)‖²`.
    pub bound: f64,
    pub bound_std_error: f64,
    pub satisfied: bool,
    pub n_samples: u64,
}

/// Estimate both sides of the second-order bound from the same samples.
///
/// `E F(J*(X))` is estimated through the interpolation `Σ λ_i(X) F(x_i)`,
/// the conditional expectation given `X`, which removes the splitting noise.
pub fn second_order_report<F>(
    q: &DualQuantizer,
    dist: &DistributionSpec,
    f: F,
    lipschitz: f64,
    n_samples: u64,
    rng: &mut RngStream,
) -> Result<SecondOrderReport>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if !q.spec().is_quadratic_euclidean() {
        return Err(DqError::InvalidArgument("second-order bound is stated for ‖·‖₂²".into()));
    }
    let est = mc::estimate_vec(2, n_samples, DEFAULT_SHARDS, rng, |r, st, out| {
        let xi = dist.sample(r);
        let sol = match q.solve(&xi, &mut st.cursor) {
            Err(DqError::Infeasible) => return Err(DqError::SampleOutsideHull),
            s => s?,
        };
        let interp: f64 = sol.basis.iter().zip(&sol.weights).map(|(&i, &w)| w * f(q.grid().point(i))).sum();
        out[0] = f(&xi) - interp;
        out[1] = sol.value;
        Ok(())
    })?;
    let (err, d2) = (est[0], est[1]);
    let bound = lipschitz * d2.value;
    let bound_std_error = lipschitz * d2.std_error;
    let sigma = err.std_error.hypot(bound_std_error);
    Ok(SecondOrderReport {
        cubature_error: err.value,
        cubature_std_error: err.std_error,
        bound,
        bound_std_error,
        satisfied: err.value.abs() <= bound + 4.0 * sigma,
        n_samples,
    })
}

/// Whether the interpolation of `f` dominates `f` at every test point, as it
/// must for convex `f`.
pub fn convex_dominance_check<F, P>(q: &DualQuantizer, f: F, test_points: &[P]) -> Result<bool>
where
    F: Fn(&[f64]) -> f64,
    P: AsRef<[f64]>,
{
    let mut cursor = 0;
    for xi in test_points {
        let xi = xi.as_ref();
        if splitting::interpolate(q, &f, xi, &mut cursor)? < f(xi) - 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{make_normal, make_uniform_box};
    use crate::geometry::NormSpec;

    fn quant(xs: &[f64]) -> DualQuantizer {
        DualQuantizer::new(Grid::from_scalars(xs).unwrap(), NormSpec::quadratic()).unwrap()
    }

    fn unit() -> DistributionSpec {
        make_uniform_box(&[0.0], &[1.0]).unwrap()
    }

    #[test]
    fn weight_examples() {
        let t = weights(&quant(&[0.0, 1.0]), &unit(), 100_000, &mut RngStream::new(1), false).unwrap();
        assert!((t.sum() - 1.0).abs() < 1e-12);
        assert!((t.weights[0] - 0.5).abs() < 4.0 * t.std_error[0]);
        let t = weights(&quant(&[0.0, 0.5, 1.0]), &unit(), 100_000, &mut RngStream::new(2), false).unwrap();
        for (w, (e, s)) in [0.25, 0.5, 0.25].iter().zip(t.weights.iter().zip(&t.std_error)) {
            assert!((w - e).abs() < 4.0 * s);
        }
    }

    #[test]
    fn exact_weights() {
        let t = exact_weights_1d(&Grid::from_scalars(&[0.0, 0.5, 1.0]).unwrap(), &unit(), Domain::Compact).unwrap();
        for (a, b) in t.weights.iter().zip([0.25, 0.5, 0.25]) {
            assert!((a - b).abs() < 1e-15);
        }
        let n = make_normal(&[0.0], 1.0).unwrap();
        let t = exact_weights_1d(&Grid::from_scalars(&[-1.0, 0.0, 2.0]).unwrap(), &n, Domain::Extended).unwrap();
        assert!((t.sum() - 1.0).abs() < 1e-14);
        // stationarity inside the hull, nearest neighbour outside
        let q = quant(&[-1.0, 0.0, 2.0]);
        let mc = weights(&q, &n, 200_000, &mut RngStream::new(5), true).unwrap();
        for i in 0..3 {
            assert!((mc.weights[i] - t.weights[i]).abs() < 4.0 * mc.std_error[i]);
        }
    }

    #[test]
    fn point_mass_at_vertex() {
        let g = Grid::from_scalars(&[0.0, 1.0]).unwrap();
        let t = WeightTable { grid: g, weights: vec![0.0, 1.0], std_error: vec![0.0; 2], n_samples: 0, seed: 0 };
        assert_eq!(expect(&t, |x| x[0] * 3.0), 3.0);
    }

    #[test]
    fn expect_examples() {
        let t = exact_weights_1d(&Grid::from_scalars(&[0.0, 1.0]).unwrap(), &unit(), Domain::Compact).unwrap();
        assert_eq!(expect(&t, |_| 1.0), 1.0);
        assert_eq!(expect(&t, |x| x[0]), 0.5);
        assert_eq!(expect(&t, |x| if x[0] == 1.0 { 1.0 } else { 0.0 }), t.weights[1]);
    }

    #[test]
    fn second_order_examples() {
        let q = quant(&[0.0, 1.0]);
        let r = second_order_report(&q, &unit(), |x| x[0] * x[0], 2.0, 100_000, &mut RngStream::new(3)).unwrap();
        // E F(X) − E F(J) = −d² for F = ‖x‖²
        assert!((r.cubature_error + 1.0 / 6.0).abs() < 4.0 * r.cubature_std_error.max(1e-12));
        assert!(r.satisfied);
        let r = second_order_report(&q, &unit(), |x| 3.0 * x[0] - 1.0, 0.0, 10_000, &mut RngStream::new(3)).unwrap();
        assert!(r.cubature_error.abs() < 1e-12);
        let q = quant(&[0.0, 0.5, 1.0]);
        let r = second_order_report(&q, &unit(), |x| x[0].cos(), 1.0, 100_000, &mut RngStream::new(4)).unwrap();
        assert!(r.satisfied);
        assert!((r.bound - 1.0 / 24.0).abs() < 4.0 * r.bound_std_error);
    }

    #[test]
    fn dominance_examples() {
        let g = Grid::new(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [0.4, 0.6], [0.7, 0.2]]).unwrap();
        let q = DualQuantizer::new(g, NormSpec::quadratic()).unwrap();
        let mut rng = RngStream::new(8);
        let pts: Vec<Vec<f64>> = (0..100).map(|_| vec![rng.uniform(), rng.uniform()]).collect();
        assert!(convex_dominance_check(&q, |x| x[0] * x[0] + x[1] * x[1], &pts).unwrap());
        assert!(convex_dominance_check(&q, |x| 2.0 * x[0] - x[1], &pts).unwrap());
        assert!(!convex_dominance_check(&q, |x| -(x[0] * x[0] + x[1] * x[1]), &pts).unwrap());
        assert_eq!(convex_dominance_check(&q, |x| x[0], &[[2.0, 2.0]]), Err(DqError::Infeasible));
    }

    #[test]
    fn test_functions() {
        assert_eq!(TestFunction::parse("poly:1,0,3").unwrap().eval(&[2.0]), 13.0);
        assert_eq!(TestFunction::Quadratic.eval(&[1.0, 2.0]), 5.0);
        let s = Support::Box { lo: vec![-1.0], hi: vec![2.0] };
        assert_eq!(TestFunction::parse("poly:0,0,1,1").unwrap().gradient_lipschitz(&s), Some(2.0 + 12.0));
        assert_eq!(TestFunction::Exp.gradient_lipschitz(&Support::Unbounded), None);
        for s in ["quadratic", "exp", "cos", "poly:1,2.5"] {
            assert_eq!(TestFunction::parse(s).unwrap().to_string(), s);
        }
        assert!(TestFunction::parse("sin").is_err());
    }
}
