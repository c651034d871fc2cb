//! Dense revised simplex for the local dual quantization program
//!
//! ```text
//!     min  Σ_j λ_j c_j   s.t.  Σ_j λ_j x_j = ξ,  Σ_j λ_j = 1,  λ ≥ 0
//! ```
//!
//! The constraint matrix has `m = d+1` rows (coordinates first, ones last) and
//! one column per grid point. Phase one adds one artificial column per row;
//! both phases use Bland's rule.

use crate::error::{DqError, Result};
use crate::geometry::Grid;
use crate::linalg::Lu;

/// Upper bound on the number of candidate bases examined by the
/// lexicographic tie-break before falling back to the simplex basis.
const TIE_BREAK_BUDGET: usize = 100_000;

#[derive(Debug, Clone)]
pub(crate) struct LpOutcome {
    /// Ascending grid indices of the optimal basis.
    pub basis: Vec<usize>,
    /// Weights aligned with `basis`.
    pub weights: Vec<f64>,
    /// Dual vector `(u1, u2)`.
    pub dual: Vec<f64>,
    pub value: f64,
}

struct Tableau<'a> {
    grid: &'a Grid,
    m: usize,
    n: usize,
    b: Vec<f64>,
    art_sign: Vec<f64>,
}

impl<'a> Tableau<'a> {
    fn new(grid: &'a Grid, xi: &[f64]) -> Self {
        let mut b = xi.to_vec();
        b.push(1.0);
        let art_sign = b.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
        Tableau { grid, m: grid.dim() + 1, n: grid.len(), b, art_sign }
    }

    fn column(&self, j: usize, out: &mut [f64]) {
        if j < self.n {
            let p = self.grid.point(j);
            out[..self.m - 1].copy_from_slice(p);
            out[self.m - 1] = 1.0;
        } else {
            out.iter_mut().for_each(|v| *v = 0.0);
            let r = j - self.n;
            out[r] = self.art_sign[r];
        }
    }

    fn basis_matrix(&self, basis: &[usize]) -> Vec<f64> {
        let m = self.m;
        let mut a = vec![0.0; m * m];
        let mut col = vec![0.0; m];
        for (c, &j) in basis.iter().enumerate() {
            self.column(j, &mut col);
            for r in 0..m {
                a[r * m + c] = col[r];
            }
        }
        a
    }

    fn factor(&self, basis: &[usize]) -> Result<Lu> {
        Lu::factor(&self.basis_matrix(basis), self.m, 0.0)
    }

    /// Run Bland-rule iterations on `basis` with cost function `cost` over
    /// the columns `0..ncols`. Returns the final factorization.
    fn iterate(
        &self,
        basis: &mut [usize],
        cost: &dyn Fn(usize) -> f64,
        ncols: usize,
        tol: f64,
    ) -> Result<Lu> {
        let m = self.m;
        let mut col = vec![0.0; m];
        // Bland's rule terminates; the cap only guards against numerical trouble.
        let max_iter = 50 * (ncols + m) + 1000;
        for _ in 0..max_iter {
            let lu = self.factor(basis)?;
            let xb = lu.solve(&self.b);
            let cb: Vec<f64> = basis.iter().map(|&j| cost(j)).collect();
            let y = lu.solve_transpose(&cb);

            let mut entering = None;
            for j in 0..ncols {
                if basis.contains(&j) {
                    continue;
                }
                self.column(j, &mut col);
                let rc = cost(j) - dot(&y, &col);
                if rc < -tol {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Ok(lu);
            };

            self.column(j, &mut col);
            let dir = lu.solve(&col);
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..m {
                if dir[r] > 1e-12 {
                    let ratio = xb[r].max(0.0) / dir[r];
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - 1e-15
                                || (ratio <= lratio + 1e-15 && basis[r] < basis[lr])
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            match leave {
                Some((r, _)) => basis[r] = j,
                // The ones row bounds every feasible point, so this signals
                // numerical breakdown rather than a genuinely unbounded program.
                None => return Err(DqError::Singular),
            }
        }
        Err(DqError::Singular)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn scale_of(grid: &Grid, xi: &[f64]) -> f64 {
    xi.iter().fold(grid.max_abs_coord(), |m, c| m.max(c.abs()))
}

/// Phase one: returns the basis (possibly still holding artificials) and
/// the residual infeasibility.
fn phase_one(tab: &Tableau<'_>, tol: f64) -> Result<(Vec<usize>, f64)> {
    let n = tab.n;
    let mut basis: Vec<usize> = (n..n + tab.m).collect();
    let cost = |j: usize| if j < n { 0.0 } else { 1.0 };
    // Artificial columns never re-enter, so only real columns are priced.
    let lu = tab.iterate(&mut basis, &cost, n, tol)?;
    let xb = lu.solve(&tab.b);
    let infeas: f64 = basis
        .iter()
        .zip(&xb)
        .filter(|(&j, _)| j >= n)
        .map(|(_, v)| v.abs())
        .sum();
    Ok((basis, infeas))
}

pub(crate) fn phase_one_feasible(grid: &Grid, xi: &[f64]) -> bool {
    let tab = Tableau::new(grid, xi);
    let tol = 1e-9 * (1.0 + scale_of(grid, xi));
    matches!(phase_one(&tab, tol), Ok((_, infeas)) if infeas <= tol)
}

/// Solve the local program for cost vector `costs` (one entry per grid point).
pub(crate) fn solve(grid: &Grid, xi: &[f64], costs: &[f64], rel_tol: f64) -> Result<LpOutcome> {
    let tab = Tableau::new(grid, xi);
    let (n, m) = (tab.n, tab.m);
    let cmax = costs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    let tol = rel_tol * (1.0 + scale_of(grid, xi).max(cmax));

    let (mut basis, infeas) = phase_one(&tab, tol)?;
    if infeas > tol {
        return Err(DqError::Infeasible);
    }

    // Drive remaining (zero-level) artificials out of the basis.
    let mut col = vec![0.0; m];
    for r in 0..m {
        if basis[r] < n {
            continue;
        }
        let lu = tab.factor(&basis)?;
        let mut unit = vec![0.0; m];
        unit[r] = 1.0;
        let row = lu.solve_transpose(&unit);
        let pivot_tol = crate::geometry::RANK_TOL * (1.0 + grid.max_abs_coord());
        let replacement = (0..n).filter(|j| !basis.contains(j)).find(|&j| {
            tab.column(j, &mut col);
            dot(&row, &col).abs() > pivot_tol
        });
        match replacement {
            Some(j) => basis[r] = j,
            None => {
                return Err(DqError::FlatGrid { adim: grid.affine_dim(), dim: grid.dim() });
            }
        }
    }

    let cost = |j: usize| costs[j];
    tab.iterate(&mut basis, &cost, n, tol)?;

    basis.sort_unstable();
    let basis = lexicographic_optimal_basis(&tab, basis, costs, tol);
    finish(&tab, basis, costs, tol)
}

/// Among the bases made of columns with vanishing reduced cost (with respect
/// to the terminal dual), return the lexicographically smallest primal
/// feasible one.
fn lexicographic_optimal_basis(
    tab: &Tableau<'_>,
    basis: Vec<usize>,
    costs: &[f64],
    tol: f64,
) -> Vec<usize> {
    let m = tab.m;
    let Ok(lu) = tab.factor(&basis) else {
        return basis;
    };
    let cb: Vec<f64> = basis.iter().map(|&j| costs[j]).collect();
    let y = lu.solve_transpose(&cb);
    let mut col = vec![0.0; m];
    let zero_rc: Vec<usize> = (0..tab.n)
        .filter(|&j| {
            tab.column(j, &mut col);
            (costs[j] - dot(&y, &col)).abs() <= tol
        })
        .collect();
    if zero_rc.len() <= m {
        return basis;
    }

    let mut examined = 0usize;
    let mut pick: Vec<usize> = (0..m).collect();
    loop {
        if examined >= TIE_BREAK_BUDGET {
            return basis;
        }
        examined += 1;
        let cand: Vec<usize> = pick.iter().map(|&k| zero_rc[k]).collect();
        if cand >= basis {
            // Nothing smaller than the simplex basis is feasible.
            return basis;
        }
        if let Ok(lu) = Lu::factor(
            &tab.basis_matrix(&cand),
            m,
            crate::geometry::RANK_TOL * (1.0 + tab.grid.max_abs_coord()),
        ) {
            let w = lu.solve(&tab.b);
            if w.iter().all(|&v| v >= -tol) {
                return cand;
            }
        }
        if !next_combination(&mut pick, zero_rc.len()) {
            return basis;
        }
    }
}

/// Advance `pick` to the next k-combination of `0..n` in lexicographic order.
pub(crate) fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if pick[i] < n - k + i {
            pick[i] += 1;
            for t in (i + 1)..k {
                pick[t] = pick[t - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn finish(tab: &Tableau<'_>, basis: Vec<usize>, costs: &[f64], tol: f64) -> Result<LpOutcome> {
    let lu = tab.factor(&basis)?;
    let mut weights = lu.solve(&tab.b);
    for w in weights.iter_mut() {
        if *w < 0.0 && *w >= -tol {
            *w = 0.0;
        }
    }
    let cb: Vec<f64> = basis.iter().map(|&j| costs[j]).collect();
    let dual = lu.solve_transpose(&cb);
    let value = dot(&weights, &cb);
    Ok(LpOutcome { basis, weights, dual, value })
}
