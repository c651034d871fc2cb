//! Delaunay triangulation of a random planar grid and the closed-form
//! quadratic solution read off its triangles.

use dualquant::delaunay2d::{dq_solve_delaunay, triangulate};
use dualquant::geometry::{Grid, NormSpec};
use dualquant::lp_core::local_dq_solve;
use dualquant::rng::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = RngStream::new(2024);
    let pts: Vec<[f64; 2]> = (0..40).map(|_| [rng.uniform(), rng.uniform()]).collect();
    let grid = Grid::new(&pts)?;
    let tri = triangulate(&grid)?;
    println!("{} points, {} triangles, {} edges", grid.len(), tri.len(), tri.edges().len());

    let mut cursor = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        // centroid of three random points stays inside the hull
        let mut pick = || pts[(rng.uniform() * pts.len() as f64) as usize];
        let (a, b, c) = (pick(), pick(), pick());
        let xi = [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0];
        let fast = dq_solve_delaunay(&grid, &tri, &xi, &mut cursor)?;
        let lp = local_dq_solve(&grid, &xi, &NormSpec::quadratic())?;
        worst = worst.max((fast.value - lp.value).abs());
    }
    println!("largest gap between triangle lookup and simplex over 1000 queries: {worst:.2e}");
    Ok(())
}
