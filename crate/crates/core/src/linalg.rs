//! Tiny dense linear algebra for (d+1)×(d+1) systems.
//!
//! Matrices are row-major `Vec<f64>`. Nothing here is meant for large
//! problems; the affine systems in this crate have at most a handful of rows.

use crate::error::{DqError, Result};

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    m: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    /// Factor a square `m×m` matrix. A pivot is treated as zero when its
    /// magnitude does not exceed `pivot_tol`.
    pub fn factor(a: &[f64], m: usize, pivot_tol: f64) -> Result<Self> {
        debug_assert_eq!(a.len(), m * m);
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..m).collect();
        for k in 0..m {
            let (p, pmax) = (k..m)
                .map(|r| (r, lu[r * m + k].abs()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax <= pivot_tol {
                return Err(DqError::Singular);
            }
            if p != k {
                for c in 0..m {
                    lu.swap(k * m + c, p * m + c);
                }
                perm.swap(k, p);
            }
            let piv = lu[k * m + k];
            for r in (k + 1)..m {
                let f = lu[r * m + k] / piv;
                lu[r * m + k] = f;
                if f != 0.0 {
                    for c in (k + 1)..m {
                        lu[r * m + c] -= f * lu[k * m + c];
                    }
                }
            }
        }
        Ok(Lu { m, lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..m {
            let mut s = x[r];
            for c in 0..r {
                s -= self.lu[r * m + c] * x[c];
            }
            x[r] = s;
        }
        for r in (0..m).rev() {
            let mut s = x[r];
            for c in (r + 1)..m {
                s -= self.lu[r * m + c] * x[c];
            }
            x[r] = s / self.lu[r * m + r];
        }
        x
    }

    /// Solve `Aᵀ y = c`.
    pub fn solve_transpose(&self, c: &[f64]) -> Vec<f64> {
        let m = self.m;
        // Aᵀ = Uᵀ Lᵀ P, so solve Uᵀ w = c, Lᵀ v = w, y = Pᵀ v.
        let mut w = c.to_vec();
        for r in 0..m {
            let mut s = w[r];
            for k in 0..r {
                s -= self.lu[k * m + r] * w[k];
            }
            w[r] = s / self.lu[r * m + r];
        }
        for r in (0..m).rev() {
            let mut s = w[r];
            for k in (r + 1)..m {
                s -= self.lu[k * m + r] * w[k];
            }
            w[r] = s;
        }
        let mut y = vec![0.0; m];
        for (i, &p) in self.perm.iter().enumerate() {
            y[p] = w[i];
        }
        y
    }
}

/// Numerical rank of a `rows×cols` row-major matrix by Gaussian elimination
/// with full pivoting; pivots with magnitude `<= tol` count as zero.
pub fn rank(a: &[f64], rows: usize, cols: usize, tol: f64) -> usize {
    let mut m = a.to_vec();
    let mut rank = 0;
    let mut row_used = vec![false; rows];
    let mut col_used = vec![false; cols];
    loop {
        let mut best = (usize::MAX, usize::MAX, tol);
        for r in (0..rows).filter(|&r| !row_used[r]) {
            for c in (0..cols).filter(|&c| !col_used[c]) {
                let v = m[r * cols + c].abs();
                if v > best.2 {
                    best = (r, c, v);
                }
            }
        }
        let (pr, pc, _) = best;
        if pr == usize::MAX {
            return rank;
        }
        row_used[pr] = true;
        col_used[pc] = true;
        rank += 1;
        let piv = m[pr * cols + pc];
        for r in (0..rows).filter(|&r| !row_used[r]) {
            let f = m[r * cols + pc] / piv;
            if f != 0.0 {
                for c in 0..cols {
                    m[r * cols + c] -= f * m[pr * cols + c];
                }
            }
        }
    }
}

/// Tridiagonal matrix stored by diagonals.
///
/// `lower[i]` is entry `(i+1, i)` and `upper[i]` is entry `(i, i+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn zeros(n: usize) -> Self {
        Tridiagonal {
            lower: vec![0.0; n.saturating_sub(1)],
            diag: vec![0.0; n],
            upper: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        if r == c {
            self.diag[r]
        } else if r + 1 == c {
            self.upper[r]
        } else if c + 1 == r {
            self.lower[c]
        } else {
            0.0
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.upper[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// Thomas elimination. Fails on a vanishing pivot.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        if n == 0 {
            return Ok(Vec::new());
        }
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut denom = self.diag[0];
        if denom.abs() < f64::MIN_POSITIVE {
            return Err(DqError::Singular);
        }
        if n > 1 {
            c[0] = self.upper[0] / denom;
        }
        d[0] = rhs[0] / denom;
        for i in 1..n {
            denom = self.diag[i] - self.lower[i - 1] * c[i - 1];
            if denom.abs() < f64::MIN_POSITIVE || !denom.is_finite() {
                return Err(DqError::Singular);
            }
            if i + 1 < n {
                c[i] = self.upper[i] / denom;
            }
            d[i] = (rhs[i] - self.lower[i - 1] * d[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Ok(d)
    }

    /// Principal sub-block `[lo, hi)`.
    pub fn block(&self, lo: usize, hi: usize) -> Tridiagonal {
        Tridiagonal {
            lower: self.lower[lo..hi.saturating_sub(1).max(lo)].to_vec(),
            diag: self.diag[lo..hi].to_vec(),
            upper: self.upper[lo..hi.saturating_sub(1).max(lo)].to_vec(),
        }
    }
}
