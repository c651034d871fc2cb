//! Self-contained SVG plots of planar grids.

use std::fmt::Write as _;

use crate::delaunay2d::Triangulation;
use crate::error::{DqError, Result};
use crate::geometry::Grid;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 30.0;

#[derive(Debug, Clone, Default)]
pub struct SvgOptions {
    pub title: Option<String>,
    pub hull: bool,
}

/// Convex hull vertices in counter-clockwise order (monotone chain).
pub fn convex_hull(grid: &Grid) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..grid.len()).collect();
    idx.sort_by(|&a, &b| {
        let (p, q) = (grid.point(a), grid.point(b));
        p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1]))
    });
    if idx.len() < 3 {
        return idx;
    }
    let cross = |o: usize, a: usize, b: usize| {
        let (o, a, b) = (grid.point(o), grid.point(a), grid.point(b));
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in [idx.clone(), idx.iter().rev().copied().collect()] {
        let start = hull.len();
        for &i in &pass {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], i) <= 0.0 {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

/// Render points, triangulation edges and optionally the hull.
pub fn render(grid: &Grid, tri: Option<&Triangulation>, opts: &SvgOptions) -> Result<String> {
    if grid.dim() != 2 {
        return Err(DqError::DimensionMismatch { expected: 2, got: grid.dim() });
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in grid.points() {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let map = |p: &[f64]| (MARGIN + (p[0] - lo[0]) * scale, SIZE - MARGIN - (p[1] - lo[1]) * scale);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(t) = &opts.title {
        let t = t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
        let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{t}</text>"#, SIZE / 2.0);
    }
    if let Some(tri) = tri {
        let _ = writeln!(s, r#"<g class="edges" stroke="steelblue" stroke-width="0.8">"#);
        for (a, b) in tri.edges() {
            let ((x1, y1), (x2, y2)) = (map(grid.point(a)), map(grid.point(b)));
            let _ = writeln!(s, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
        }
        let _ = writeln!(s, "</g>");
    }
    if opts.hull {
        let pts: Vec<String> = convex_hull(grid)
            .iter()
            .map(|&i| {
                let (x, y) = map(grid.point(i));
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(s, r#"<polygon class="hull" points="{}" fill="none" stroke="gray" stroke-dasharray="4 3"/>"#, pts.join(" "));
    }
    let _ = writeln!(s, r#"<g class="points">"#);
    for (i, p) in grid.points().enumerate() {
        let (x, y) = map(p);
        let fill = if grid.is_pinned(i) { "crimson" } else { "black" };
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="{fill}"/>"#);
    }
    let _ = writeln!(s, "</g>\n</svg>");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delaunay2d::triangulate;

    #[test]
    fn structure() {
        let g = Grid::new(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [0.4, 0.5]]).unwrap();
        let t = triangulate(&g).unwrap();
        let s = render(&g, Some(&t), &SvgOptions { title: Some("a<b".into()), hull: true }).unwrap();
        assert_eq!(s.matches("<circle").count(), 5);
        assert_eq!(s.matches("<line").count(), t.edges().len());
        assert!(s.contains("a&lt;b"));
        assert_eq!(convex_hull(&g), vec![0, 1, 3, 2]);
    }

    #[test]
    fn non_planar_rejected() {
        let g = Grid::from_scalars(&[0.0, 1.0]).unwrap();
        assert!(render(&g, None, &SvgOptions::default()).is_err());
    }
}
