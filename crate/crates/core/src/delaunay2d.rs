//! Planar Delaunay triangulation and the closed-form local solution for the
//! quadratic Euclidean cost.
//!
//! Construction is Bowyer–Watson incremental insertion. The unbounded face is
//! represented by ghost triangles `(u, v, ∞)`, one per hull edge, which plays
//! the role of the usual super-triangle without the risk of losing hull
//! triangles when it is removed. Points are inserted in index order.
//!
//! When four or more points are cocircular (within the predicate tolerance)
//! every diagonal of the cocircular polygon is Delaunay. A final flip pass
//! selects, for each such quadrilateral, the diagonal whose sorted index
//! pair is lexicographically smallest, so the output only depends on the
//! input order through the point indices.
//!
//! For a Delaunay triangle `I` containing `ξ` the barycentric coordinates
//! solve the local program, and the dual is `u1 = 2 (z − ξ)` with `z` the
//! circumcenter of `I`.

use std::collections::{HashMap, HashSet};

use crate::error::{DqError, Result};
use crate::geometry::{circumcenter, Grid};
use crate::lp_core::LocalSolution;

const GHOST: usize = usize::MAX;
const PREDICATE_EPS: f64 = 1e-12;
const LOCATE_TOL: f64 = 1e-12;

#[inline]
fn pt(coords: &[f64], i: usize) -> [f64; 2] {
    [coords[2 * i], coords[2 * i + 1]]
}

/// Orientation of `(a, b, c)`: `+1` counterclockwise, `-1` clockwise, `0`
/// when collinear within the relative tolerance.
pub fn orient2d(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> i8 {
    let l = (b[0] - a[0]) * (c[1] - a[1]);
    let r = (b[1] - a[1]) * (c[0] - a[0]);
    let det = l - r;
    let eps = PREDICATE_EPS * (l.abs() + r.abs());
    if det > eps {
        1
    } else if det < -eps {
        -1
    } else {
        0
    }
}

/// In-circle test for a counterclockwise triangle `(a, b, c)`: `+1` when `d`
/// is strictly inside the circumcircle, `-1` strictly outside, `0` when
/// cocircular within the relative tolerance.
pub fn incircle(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> i8 {
    let (adx, ady) = (a[0] - d[0], a[1] - d[1]);
    let (bdx, bdy) = (b[0] - d[0], b[1] - d[1]);
    let (cdx, cdy) = (c[0] - d[0], c[1] - d[1]);
    let alift = adx * adx + ady * ady;
    let blift = bdx * bdx + bdy * bdy;
    let clift = cdx * cdx + cdy * cdy;
    let (bc1, bc2) = (bdx * cdy, cdx * bdy);
    let (ca1, ca2) = (cdx * ady, adx * cdy);
    let (ab1, ab2) = (adx * bdy, bdx * ady);
    let det = alift * (bc1 - bc2) + blift * (ca1 - ca2) + clift * (ab1 - ab2);
    let perm = alift * (bc1.abs() + bc2.abs())
        + blift * (ca1.abs() + ca2.abs())
        + clift * (ab1.abs() + ab2.abs());
    let eps = PREDICATE_EPS * perm;
    if det > eps {
        1
    } else if det < -eps {
        -1
    } else {
        0
    }
}

/// Triangle list with per-edge adjacency.
///
/// `triangles[t]` is counterclockwise with its smallest index first;
/// `neighbors[t][k]` is the triangle across the edge opposite vertex `k`, or
/// `None` on the hull. Triangles are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    triangles: Vec<[usize; 3]>,
    neighbors: Vec<[Option<usize>; 3]>,
}

/// Result of point location.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Triangle(usize),
    Outside,
}

impl Triangulation {
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn neighbors(&self) -> &[[Option<usize>; 3]] {
        &self.neighbors
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Undirected edges as sorted index pairs, in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| (0..3).map(move |k| (t[k].min(t[(k + 1) % 3]), t[k].max(t[(k + 1) % 3]))))
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    fn from_raw(mut tris: Vec<[usize; 3]>) -> Self {
        for t in tris.iter_mut() {
            let k = (0..3).min_by_key(|&k| t[k]).unwrap();
            t.rotate_left(k);
        }
        tris.sort_unstable();
        let mut edge_owner: HashMap<(usize, usize), usize> = HashMap::with_capacity(3 * tris.len());
        for (ti, t) in tris.iter().enumerate() {
            for k in 0..3 {
                edge_owner.insert((t[k], t[(k + 1) % 3]), ti);
            }
        }
        let neighbors = tris
            .iter()
            .map(|t| {
                let mut nb = [None; 3];
                for (k, slot) in nb.iter_mut().enumerate() {
                    let (a, b) = (t[(k + 1) % 3], t[(k + 2) % 3]);
                    *slot = edge_owner.get(&(b, a)).copied();
                }
                nb
            })
            .collect();
        Triangulation { triangles: tris, neighbors }
    }

    /// Barycentric weights of `xi` in triangle `t` using the grid's current
    /// coordinates.
    pub fn barycentric(&self, grid: &Grid, t: usize, xi: &[f64]) -> [f64; 3] {
        let [i, j, k] = self.triangles[t];
        let (a, b, c) = (grid.point(i), grid.point(j), grid.point(k));
        let det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        let l1 = ((b[0] - xi[0]) * (c[1] - xi[1]) - (b[1] - xi[1]) * (c[0] - xi[0])) / det;
        let l2 = ((c[0] - xi[0]) * (a[1] - xi[1]) - (c[1] - xi[1]) * (a[0] - xi[0])) / det;
        [l1, l2, 1.0 - l1 - l2]
    }

    fn contains(&self, grid: &Grid, t: usize, xi: &[f64]) -> bool {
        let l = self.barycentric(grid, t, xi);
        l.iter().all(|&v| v >= -LOCATE_TOL && v.is_finite())
    }

    /// Locate the triangle containing `xi`, walking from `*cursor`. Points on
    /// shared edges or vertices resolve to the lowest-indexed containing
    /// triangle. Updates the cursor on success.
    pub fn locate(&self, grid: &Grid, xi: &[f64], cursor: &mut usize) -> Location {
        if self.triangles.is_empty() {
            return Location::Outside;
        }
        let mut t = if *cursor < self.triangles.len() { *cursor } else { 0 };
        let max_steps = 4 * self.triangles.len() + 16;
        let mut found = None;
        let mut steps = 0;
        'walk: while steps < max_steps {
            steps += 1;
            let tri = self.triangles[t];
            // rotate the starting edge to avoid cycling on degenerate configurations
            let start = steps % 3;
            for off in 0..3 {
                let k = (start + off) % 3;
                let (a, b) = (grid.point(tri[(k + 1) % 3]), grid.point(tri[(k + 2) % 3]));
                let side = (b[0] - a[0]) * (xi[1] - a[1]) - (b[1] - a[1]) * (xi[0] - a[0]);
                let scale = ((b[0] - a[0]).abs() + (b[1] - a[1]).abs())
                    * ((xi[0] - a[0]).abs() + (xi[1] - a[1]).abs());
                if side < -LOCATE_TOL * scale {
                    match self.neighbors[t][k] {
                        Some(nb) => {
                            t = nb;
                            continue 'walk;
                        }
                        None => break 'walk,
                    }
                }
            }
            found = Some(t);
            break;
        }
        let t = match found {
            Some(t) if self.contains(grid, t, xi) => t,
            _ => match (0..self.triangles.len()).find(|&t| self.contains(grid, t, xi)) {
                Some(t) => t,
                None => return Location::Outside,
            },
        };
        let l = self.barycentric(grid, t, xi);
        let t = if l.iter().any(|&v| v <= LOCATE_TOL) {
            (0..self.triangles.len()).find(|&s| self.contains(grid, s, xi)).unwrap_or(t)
        } else {
            t
        };
        *cursor = t;
        Location::Triangle(t)
    }

    /// Whether each neighbour's opposite vertex lies outside the circumcircle
    /// of `t` (evaluated with the grid's current coordinates).
    pub fn is_locally_delaunay(&self, grid: &Grid, t: usize) -> bool {
        let tri = self.triangles[t];
        let c = grid.coords();
        let (a, b, cc) = (pt(c, tri[0]), pt(c, tri[1]), pt(c, tri[2]));
        if orient2d(a, b, cc) <= 0 {
            return false;
        }
        self.neighbors[t].iter().flatten().all(|&nb| {
            self.triangles[nb]
                .iter()
                .filter(|v| !tri.contains(v))
                .all(|&v| incircle(a, b, cc, pt(c, v)) <= 0)
        })
    }
}

struct Builder<'a> {
    coords: &'a [f64],
    tris: Vec<[usize; 3]>,
    alive: Vec<bool>,
    edges: HashMap<(usize, usize), usize>,
    last: usize,
}

impl<'a> Builder<'a> {
    fn p(&self, i: usize) -> [f64; 2] {
        pt(self.coords, i)
    }

    fn add(&mut self, mut t: [usize; 3]) -> usize {
        if let Some(k) = t.iter().position(|&v| v == GHOST) {
            t.rotate_left((k + 1) % 3);
        }
        let id = self.tris.len();
        for k in 0..3 {
            self.edges.insert((t[k], t[(k + 1) % 3]), id);
        }
        self.tris.push(t);
        self.alive.push(true);
        if t[2] != GHOST {
            self.last = id;
        }
        id
    }

    fn kill(&mut self, id: usize) {
        let t = self.tris[id];
        self.alive[id] = false;
        for k in 0..3 {
            let e = (t[k], t[(k + 1) % 3]);
            if self.edges.get(&e) == Some(&id) {
                self.edges.remove(&e);
            }
        }
    }

    fn across(&self, id: usize, k: usize) -> Option<usize> {
        let t = self.tris[id];
        self.edges.get(&(t[(k + 1) % 3], t[k])).copied()
    }

    fn in_conflict(&self, id: usize, q: [f64; 2]) -> bool {
        let t = self.tris[id];
        if t[2] == GHOST {
            let (u, v) = (self.p(t[0]), self.p(t[1]));
            match orient2d(u, v, q) {
                1 => true,
                -1 => false,
                _ => {
                    let d1 = (q[0] - u[0]) * (v[0] - u[0]) + (q[1] - u[1]) * (v[1] - u[1]);
                    let d2 = (q[0] - v[0]) * (u[0] - v[0]) + (q[1] - v[1]) * (u[1] - v[1]);
                    d1 > 0.0 && d2 > 0.0
                }
            }
        } else {
            incircle(self.p(t[0]), self.p(t[1]), self.p(t[2]), q) > 0
        }
    }

    fn find_conflict(&self, q: [f64; 2]) -> Option<usize> {
        let mut t = self.last;
        let max_steps = self.tris.len() + 16;
        for step in 0..max_steps {
            if !self.alive[t] {
                break;
            }
            let tri = self.tris[t];
            if tri[2] == GHOST {
                return self.in_conflict(t, q).then_some(t);
            }
            let mut moved = false;
            for off in 0..3 {
                let k = (step + off) % 3;
                let (a, b) = (self.p(tri[k]), self.p(tri[(k + 1) % 3]));
                if orient2d(a, b, q) < 0 {
                    if let Some(nb) = self.across(t, k) {
                        t = nb;
                        moved = true;
                        break;
                    }
                }
            }
            if !moved {
                if self.in_conflict(t, q) {
                    return Some(t);
                }
                break;
            }
        }
        (0..self.tris.len()).find(|&id| self.alive[id] && self.in_conflict(id, q))
    }

    fn insert(&mut self, i: usize) -> Result<()> {
        let q = self.p(i);
        let seed = self.find_conflict(q).ok_or(DqError::Degenerate)?;
        let mut cavity = vec![seed];
        let mut in_cavity: HashSet<usize> = HashSet::from([seed]);
        let mut head = 0;
        while head < cavity.len() {
            let id = cavity[head];
            head += 1;
            for k in 0..3 {
                if let Some(nb) = self.across(id, k) {
                    if !in_cavity.contains(&nb) && self.in_conflict(nb, q) {
                        in_cavity.insert(nb);
                        cavity.push(nb);
                    }
                }
            }
        }
        let mut boundary = Vec::new();
        for &id in &cavity {
            for k in 0..3 {
                let inside = self.across(id, k).is_some_and(|nb| in_cavity.contains(&nb));
                if !inside {
                    let t = self.tris[id];
                    boundary.push((t[k], t[(k + 1) % 3]));
                }
            }
        }
        cavity.sort_unstable();
        for &id in &cavity {
            self.kill(id);
        }
        for (a, b) in boundary {
            if a == i || b == i {
                return Err(DqError::Degenerate);
            }
            self.add([a, b, i]);
        }
        Ok(())
    }
}

/// Delaunay triangulation of a planar grid.
pub fn triangulate(grid: &Grid) -> Result<Triangulation> {
    if grid.dim() != 2 {
        return Err(DqError::DimensionMismatch { expected: 2, got: grid.dim() });
    }
    let n = grid.len();
    if n < 3 {
        return Err(DqError::Collinear);
    }
    let coords = grid.coords();
    let (i0, i1) = (0, 1);
    let i2 = (2..n)
        .find(|&k| orient2d(pt(coords, i0), pt(coords, i1), pt(coords, k)) != 0)
        .ok_or(DqError::Collinear)?;
    let mut b = Builder {
        coords,
        tris: Vec::with_capacity(4 * n),
        alive: Vec::with_capacity(4 * n),
        edges: HashMap::with_capacity(8 * n),
        last: 0,
    };
    let (a, bb, c) = if orient2d(pt(coords, i0), pt(coords, i1), pt(coords, i2)) > 0 {
        (i0, i1, i2)
    } else {
        (i0, i2, i1)
    };
    b.add([bb, a, GHOST]);
    b.add([c, bb, GHOST]);
    b.add([a, c, GHOST]);
    b.add([a, bb, c]);
    for i in (2..n).filter(|&k| k != i2) {
        b.insert(i)?;
    }
    let tris: Vec<[usize; 3]> = b
        .tris
        .iter()
        .zip(&b.alive)
        .filter(|(t, &alive)| alive && t[2] != GHOST)
        .map(|(t, _)| *t)
        .collect();
    let tris = settle_cocircular(coords, tris);
    Ok(Triangulation::from_raw(tris))
}

/// Flip pass: restore the Delaunay property where tolerance let it slip and
/// pick the lexicographically smallest diagonal for cocircular quads.
fn settle_cocircular(coords: &[f64], mut tris: Vec<[usize; 3]>) -> Vec<[usize; 3]> {
    let mut owner: HashMap<(usize, usize), usize> = HashMap::with_capacity(3 * tris.len());
    for (id, t) in tris.iter().enumerate() {
        for k in 0..3 {
            owner.insert((t[k], t[(k + 1) % 3]), id);
        }
    }
    let max_rounds = 4 * tris.len() + 16;
    for _ in 0..max_rounds {
        let mut flipped = false;
        for id in 0..tris.len() {
            for k in 0..3 {
                let t = tris[id];
                let (a, b, c) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
                let Some(&other) = owner.get(&(b, a)) else { continue };
                let o = tris[other];
                let d = *o.iter().find(|&&v| v != a && v != b).unwrap();
                let (pa, pb, pc, pd) = (pt(coords, a), pt(coords, b), pt(coords, c), pt(coords, d));
                let ic = incircle(pa, pb, pc, pd);
                let want = match ic {
                    1 => true,
                    0 => (c.min(d), c.max(d)) < (a.min(b), a.max(b)),
                    _ => false,
                };
                if !want || orient2d(pc, pa, pd) <= 0 || orient2d(pd, pb, pc) <= 0 {
                    continue;
                }
                for tt in [t, o] {
                    for j in 0..3 {
                        owner.remove(&(tt[j], tt[(j + 1) % 3]));
                    }
                }
                tris[id] = [c, a, d];
                tris[other] = [d, b, c];
                for (tid, tt) in [(id, tris[id]), (other, tris[other])] {
                    for j in 0..3 {
                        owner.insert((tt[j], tt[(j + 1) % 3]), tid);
                    }
                }
                flipped = true;
            }
        }
        if !flipped {
            break;
        }
    }
    tris
}

/// Closed-form local solution for `‖·‖₂²` from the Delaunay triangle
/// containing `xi`.
pub fn dq_solve_delaunay(
    grid: &Grid,
    tri: &Triangulation,
    xi: &[f64],
    cursor: &mut usize,
) -> Result<LocalSolution> {
    grid.check_query(xi)?;
    match tri.locate(grid, xi, cursor) {
        Location::Outside => Err(DqError::Infeasible),
        Location::Triangle(t) => solve_in_triangle(grid, tri, t, xi),
    }
}

pub(crate) fn solve_in_triangle(
    grid: &Grid,
    tri: &Triangulation,
    t: usize,
    xi: &[f64],
) -> Result<LocalSolution> {
    let verts = tri.triangles[t];
    let lam = tri.barycentric(grid, t, xi);
    let (z, _) = circumcenter(&[grid.point(verts[0]), grid.point(verts[1]), grid.point(verts[2])])?;
    let mut pairs: Vec<(usize, f64)> =
        verts.iter().zip(lam).map(|(&v, l)| (v, if l < 0.0 { 0.0 } else { l })).collect();
    pairs.sort_unstable_by_key(|p| p.0);
    let u1 = vec![2.0 * (z[0] - xi[0]), 2.0 * (z[1] - xi[1])];
    let x0 = grid.point(pairs[0].0);
    let c0 = (xi[0] - x0[0]).powi(2) + (xi[1] - x0[1]).powi(2);
    let u2 = c0 - (x0[0] * u1[0] + x0[1] * u1[1]);
    let value = pairs
        .iter()
        .map(|&(v, l)| {
            let x = grid.point(v);
            l * ((xi[0] - x[0]).powi(2) + (xi[1] - x[1]).powi(2))
        })
        .sum();
    Ok(LocalSolution {
        basis: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
        u1,
        u2,
        value,
    })
}
