//! Local-solution dispatch: Delaunay fast path for `‖·‖₂²` in the plane,
//! linear programming everywhere else.

use crate::delaunay2d::{self, Location, Triangulation};
use crate::error::{DqError, Result};
use crate::geometry::{Grid, NormSpec};
use crate::lp_core::{self, LocalSolution, LpOptions, Mode};

/// A grid paired with a cost and, in the planar quadratic case, its
/// Delaunay triangulation.
#[derive(Debug, Clone)]
pub struct DualQuantizer {
    grid: Grid,
    spec: NormSpec,
    tri: Option<Triangulation>,
    opts: LpOptions,
}

/// Local solution of the extended functional.
#[derive(Debug, Clone, PartialEq)]
pub enum Resolved {
    Interior(LocalSolution),
    /// Nearest grid index and `‖ξ − x_nn‖^p`.
    Exterior { index: usize, value: f64 },
}

impl Resolved {
    pub fn value(&self) -> f64 {
        match self {
            Resolved::Interior(s) => s.value,
            Resolved::Exterior { value, .. } => *value,
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Resolved::Interior(_) => Mode::Interior,
            Resolved::Exterior { .. } => Mode::Exterior,
        }
    }
}

impl DualQuantizer {
    /// Builds the triangulation when `d = 2` and the cost is `‖·‖₂²`.
    pub fn new(grid: Grid, spec: NormSpec) -> Result<Self> {
        lp_core::check_full_dim(&grid)?;
        let tri = if grid.dim() == 2 && spec.is_quadratic_euclidean() {
            Some(delaunay2d::triangulate(&grid)?)
        } else {
            None
        };
        Ok(DualQuantizer { grid, spec, tri, opts: LpOptions::default() })
    }

    /// Always solve through the linear program.
    pub fn lp_only(grid: Grid, spec: NormSpec) -> Result<Self> {
        lp_core::check_full_dim(&grid)?;
        Ok(DualQuantizer { grid, spec, tri: None, opts: LpOptions::default() })
    }

    pub fn with_options(mut self, opts: LpOptions) -> Self {
        self.opts = opts;
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn spec(&self) -> &NormSpec {
        &self.spec
    }

    pub fn triangulation(&self) -> Option<&Triangulation> {
        self.tri.as_ref()
    }

    pub fn into_grid(self) -> Grid {
        self.grid
    }

    /// Local solution at `xi`; `cursor` is the caller's point-location hint.
    pub fn solve(&self, xi: &[f64], cursor: &mut usize) -> Result<LocalSolution> {
        self.grid.check_query(xi)?;
        match &self.tri {
            Some(tri) => match tri.locate(&self.grid, xi, cursor) {
                Location::Triangle(t) => delaunay2d::solve_in_triangle(&self.grid, tri, t, xi),
                Location::Outside => Err(DqError::Infeasible),
            },
            None => lp_core::solve_unchecked(&self.grid, xi, &self.spec, &self.opts),
        }
    }

    /// Extended local solution, total on `R^d`.
    pub fn resolve(&self, xi: &[f64], cursor: &mut usize) -> Result<Resolved> {
        match self.solve(xi, cursor) {
            Ok(s) => Ok(Resolved::Interior(s)),
            Err(DqError::Infeasible) => {
                let index = lp_core::nearest_index(&self.grid, xi, &self.spec);
                let value = self.spec.dist_p(xi, self.grid.point(index));
                Ok(Resolved::Exterior { index, value })
            }
            Err(e) => Err(e),
        }
    }

    /// `F^p(ξ; Γ)` or its extension outside the hull.
    pub fn value(&self, xi: &[f64], extended: bool, cursor: &mut usize) -> Result<f64> {
        if extended {
            self.resolve(xi, cursor).map(|r| r.value())
        } else {
            self.solve(xi, cursor).map(|s| s.value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::NormKind;

    #[test]
    fn dispatch_picks_delaunay_only_for_planar_quadratic() {
        let g = Grid::new(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert!(DualQuantizer::new(g.clone(), NormSpec::quadratic()).unwrap().triangulation().is_some());
        let l1 = NormSpec::new(NormKind::L1, 1.0).unwrap();
        assert!(DualQuantizer::new(g, l1).unwrap().triangulation().is_none());
        let g1 = Grid::from_scalars(&[0.0, 1.0]).unwrap();
        assert!(DualQuantizer::new(g1, NormSpec::quadratic()).unwrap().triangulation().is_none());
    }

    #[test]
    fn resolve_outside() {
        let g = Grid::from_scalars(&[0.0, 1.0]).unwrap();
        let q = DualQuantizer::new(g, NormSpec::quadratic()).unwrap();
        assert_eq!(q.resolve(&[2.0], &mut 0).unwrap(), Resolved::Exterior { index: 1, value: 1.0 });
        assert_eq!(q.value(&[2.0], false, &mut 0), Err(DqError::Infeasible));
    }

    #[test]
    fn flat_grid_rejected() {
        let g = Grid::new(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).unwrap();
        assert!(matches!(
            DualQuantizer::new(g, NormSpec::quadratic()),
            Err(DqError::FlatGrid { .. })
        ));
    }
}
