//! Sampling laws and their one-dimensional integrals.
//!
//! Partial moments are `M_k(a, b) = ∫_a^b ξ^k P(dξ)` for `k ∈ {0, 1, 2}`;
//! the 1D error and Newton code is written entirely in terms of them.

use std::fmt;

use rand_distr::{Distribution, Exp, StandardNormal};
use statrs::function::erf::erfc;

use crate::error::{DqError, Result};
use crate::rng::RngStream;

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

#[derive(Debug, Clone, PartialEq)]
pub enum Law {
    /// Uniform on the box `[lo, hi]`.
    Uniform { lo: Vec<f64>, hi: Vec<f64> },
    /// `N(mean, scale² I_d)`.
    Normal { mean: Vec<f64>, scale: f64 },
    /// Exponential with the given rate, on `[0, ∞)`.
    Exponential { rate: f64 },
    /// `(W_1, sup_{[0,1]} W)` for a standard Brownian motion `W`.
    BmSup,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSpec {
    law: Law,
}

pub fn make_uniform_box(lo: &[f64], hi: &[f64]) -> Result<DistributionSpec> {
    if lo.is_empty() || lo.len() != hi.len() {
        return Err(DqError::InvalidArgument("box bounds must have equal, positive length".into()));
    }
    if lo.iter().zip(hi).any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite()) {
        return Err(DqError::InvalidArgument("empty box: need lo < hi componentwise".into()));
    }
    Ok(DistributionSpec { law: Law::Uniform { lo: lo.to_vec(), hi: hi.to_vec() } })
}

pub fn make_normal(mean: &[f64], scale: f64) -> Result<DistributionSpec> {
    if mean.is_empty() || !(scale > 0.0) || !scale.is_finite() {
        return Err(DqError::InvalidArgument("normal law needs d >= 1 and scale > 0".into()));
    }
    Ok(DistributionSpec { law: Law::Normal { mean: mean.to_vec(), scale } })
}

pub fn make_exponential(rate: f64) -> Result<DistributionSpec> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(DqError::InvalidArgument("exponential rate must be > 0".into()));
    }
    Ok(DistributionSpec { law: Law::Exponential { rate } })
}

pub fn make_bm_sup() -> DistributionSpec {
    DistributionSpec { law: Law::BmSup }
}

fn std_normal_cdf(t: f64) -> f64 {
    0.5 * erfc(-t / std::f64::consts::SQRT_2)
}

fn std_normal_pdf(t: f64) -> f64 {
    if t.is_infinite() {
        0.0
    } else {
        FRAC_1_SQRT_2PI * (-0.5 * t * t).exp()
    }
}

/// `t φ(t)`, zero at ±∞.
fn t_pdf(t: f64) -> f64 {
    if t.is_infinite() {
        0.0
    } else {
        t * std_normal_pdf(t)
    }
}

impl DistributionSpec {
    pub fn law(&self) -> &Law {
        &self.law
    }

    pub fn dim(&self) -> usize {
        match &self.law {
            Law::Uniform { lo, .. } => lo.len(),
            Law::Normal { mean, .. } => mean.len(),
            Law::Exponential { .. } => 1,
            Law::BmSup => 2,
        }
    }

    pub fn support(&self) -> Support {
        match &self.law {
            Law::Uniform { lo, hi } => Support::Box { lo: lo.clone(), hi: hi.clone() },
            _ => Support::Unbounded,
        }
    }

    /// Draw one sample into `out` (length `dim()`).
    pub fn sample_into(&self, rng: &mut RngStream, out: &mut [f64]) {
        match &self.law {
            Law::Uniform { lo, hi } => {
                for ((o, a), b) in out.iter_mut().zip(lo).zip(hi) {
                    *o = a + (b - a) * rng.uniform();
                }
            }
            Law::Normal { mean, scale } => {
                for (o, m) in out.iter_mut().zip(mean) {
                    let z: f64 = StandardNormal.sample(rng);
                    *o = m + scale * z;
                }
            }
            Law::Exponential { rate } => {
                out[0] = Exp::new(*rate).expect("validated rate").sample(rng);
            }
            Law::BmSup => {
                // M | W_1 = b  has  P(M > m) = exp(-2 m (m - b)),  m >= max(b, 0)
                let b: f64 = StandardNormal.sample(rng);
                let u = 1.0 - rng.uniform();
                out[0] = b;
                out[1] = 0.5 * (b + (b * b - 2.0 * u.ln()).sqrt());
            }
        }
    }

    pub fn sample(&self, rng: &mut RngStream) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.sample_into(rng, &mut out);
        out
    }

    /// Closed-form 1D integrals are available.
    pub fn has_analytics(&self) -> bool {
        self.dim() == 1 && !matches!(self.law, Law::BmSup)
    }

    fn require_1d(&self) -> Result<()> {
        if self.has_analytics() {
            Ok(())
        } else {
            Err(DqError::MissingAnalytics)
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.require_1d()?;
        Ok(match &self.law {
            Law::Uniform { lo, hi } => ((x - lo[0]) / (hi[0] - lo[0])).clamp(0.0, 1.0),
            Law::Normal { mean, scale } => std_normal_cdf((x - mean[0]) / scale),
            Law::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            Law::BmSup => unreachable!(),
        })
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        self.require_1d()?;
        Ok(match &self.law {
            Law::Uniform { lo, hi } => {
                if x >= lo[0] && x <= hi[0] {
                    1.0 / (hi[0] - lo[0])
                } else {
                    0.0
                }
            }
            Law::Normal { mean, scale } => std_normal_pdf((x - mean[0]) / scale) / scale,
            Law::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
            Law::BmSup => unreachable!(),
        })
    }

    /// `∫_a^b ξ^k P(dξ)` for `k ≤ 2`; `a`, `b` may be infinite.
    pub fn partial_moment(&self, k: u32, a: f64, b: f64) -> Result<f64> {
        self.require_1d()?;
        if k > 2 {
            return Err(DqError::InvalidArgument(format!("partial moment of order {k}")));
        }
        if b < a {
            return Ok(-self.partial_moment(k, b, a)?);
        }
        let m = match &self.law {
            Law::Uniform { lo, hi } => {
                let (lo, hi) = (lo[0], hi[0]);
                let (a, b) = (a.max(lo), b.min(hi));
                if b <= a {
                    0.0
                } else {
                    let kp = (k + 1) as i32;
                    (b.powi(kp) - a.powi(kp)) / (kp as f64 * (hi - lo))
                }
            }
            Law::Normal { mean, scale } => {
                let (mu, s) = (mean[0], *scale);
                let (ta, tb) = ((a - mu) / s, (b - mu) / s);
                let p0 = std_normal_cdf(tb) - std_normal_cdf(ta);
                let p1 = std_normal_pdf(ta) - std_normal_pdf(tb);
                let p2 = p0 + t_pdf(ta) - t_pdf(tb);
                match k {
                    0 => p0,
                    1 => mu * p0 + s * p1,
                    _ => mu * mu * p0 + 2.0 * mu * s * p1 + s * s * p2,
                }
            }
            Law::Exponential { rate } => {
                let l = *rate;
                let (a, b) = (a.max(0.0), b.max(0.0));
                // antiderivative G_k(x) = −q_k(x) e^{−λx}
                let q = |x: f64| -> f64 {
                    if x.is_infinite() {
                        return 0.0;
                    }
                    let poly = match k {
                        0 => 1.0,
                        1 => x + 1.0 / l,
                        _ => x * x + 2.0 * x / l + 2.0 / (l * l),
                    };
                    poly * (-l * x).exp()
                };
                q(a) - q(b)
            }
            Law::BmSup => unreachable!(),
        };
        Ok(m)
    }

    /// Inverse cdf by bisection (1D laws).
    pub fn quantile(&self, u: f64) -> Result<f64> {
        self.require_1d()?;
        if !(0.0..=1.0).contains(&u) {
            return Err(DqError::InvalidArgument(format!("quantile level {u}")));
        }
        let (mut lo, mut hi) = match &self.law {
            Law::Uniform { lo, hi } => (lo[0], hi[0]),
            Law::Normal { mean, scale } => (mean[0] - 40.0 * scale, mean[0] + 40.0 * scale),
            Law::Exponential { rate } => (0.0, 800.0 / rate),
            Law::BmSup => unreachable!(),
        };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid)? < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Parse a selection string: `uniform:lo,hi`, `normal:mu,sigma`,
    /// `exponential:lambda`, `uniform2d`, `normal2d`, `bmsup`.
    pub fn parse(s: &str) -> Result<Self> {
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a)),
            None => (s.trim(), None),
        };
        let nums = |a: Option<&str>, k: usize| -> Result<Vec<f64>> {
            let a = a.ok_or_else(|| DqError::Parse(format!("'{name}' needs {k} parameters")))?;
            let v: Vec<f64> = a
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|e| DqError::Parse(format!("{t}: {e}"))))
                .collect::<Result<_>>()?;
            if v.len() != k {
                return Err(DqError::Parse(format!("'{name}' needs {k} parameters, got {}", v.len())));
            }
            Ok(v)
        };
        match name.to_ascii_lowercase().as_str() {
            "uniform" => {
                let v = nums(args, 2)?;
                make_uniform_box(&[v[0]], &[v[1]])
            }
            "normal" => {
                let v = nums(args, 2)?;
                make_normal(&[v[0]], v[1])
            }
            "exponential" => make_exponential(nums(args, 1)?[0]),
            "uniform2d" => make_uniform_box(&[0.0, 0.0], &[1.0, 1.0]),
            "normal2d" => make_normal(&[0.0, 0.0], 1.0),
            "bmsup" => Ok(make_bm_sup()),
            other => Err(DqError::Parse(format!("unknown distribution '{other}'"))),
        }
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.law {
            Law::Uniform { lo, hi } if lo.len() == 1 => write!(f, "uniform:{},{}", lo[0], hi[0]),
            Law::Uniform { lo, hi } if lo.len() == 2 && lo == &[0.0, 0.0] && hi == &[1.0, 1.0] => {
                f.write_str("uniform2d")
            }
            Law::Uniform { lo, hi } => write!(f, "uniform{lo:?}x{hi:?}"),
            Law::Normal { mean, scale } if mean.len() == 1 => write!(f, "normal:{},{}", mean[0], scale),
            Law::Normal { mean, scale } if mean == &[0.0, 0.0] && *scale == 1.0 => f.write_str("normal2d"),
            Law::Normal { mean, scale } => write!(f, "normal{mean:?}*{scale}"),
            Law::Exponential { rate } => write!(f, "exponential:{rate}"),
            Law::BmSup => f.write_str("bmsup"),
        }
    }
}
