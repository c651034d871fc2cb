//! Exact and Monte Carlo quantization errors, bounds and the convergence rate
//! of product grids.

use dualquant::distributions::{make_normal, make_uniform_box};
use dualquant::error_metrics::{
    exact_1d_dq_error, exact_1d_voronoi_error, mc_dq_error, product_bound, product_grid, rate_fit,
    theoretical_1d_uniform, voronoi_uniform_optimum, Domain,
};
use dualquant::geometry::{Grid, NormSpec};
use dualquant::quantizer::DualQuantizer;
use dualquant::rng::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let unif = make_uniform_box(&[0.0], &[1.0])?;
    println!("n     dual      voronoi   ratio of roots");
    for n in [3, 11, 101] {
        let dual = exact_1d_dq_error(&theoretical_1d_uniform(n, 2.0)?.0, &unif, Domain::Compact)?;
        let vor = exact_1d_voronoi_error(&voronoi_uniform_optimum(n, 2.0)?.0, &unif)?;
        println!("{n:<5} {dual:.3e} {vor:.3e} {:.4}", (dual / vor).sqrt());
    }

    let normal = make_normal(&[0.0], 1.0)?;
    let g = Grid::from_scalars(&[-1.5, -0.5, 0.5, 1.5])?;
    println!("extended error of {{-1.5,-0.5,0.5,1.5}} under N(0,1): {:.5}", exact_1d_dq_error(&g, &normal, Domain::Extended)?);

    let square = make_uniform_box(&[0.0, 0.0], &[1.0, 1.0])?;
    let spec = NormSpec::quadratic();
    let ladder = [1usize, 2, 4, 8];
    let mut errors = Vec::new();
    for &m in &ladder {
        let q = DualQuantizer::new(product_grid(&[0.0, 0.0], &[1.0, 1.0], m)?, spec)?;
        let est = mc_dq_error(&q, &square, 200_000, &mut RngStream::new(1), false)?;
        println!("m={m}: d² = {:.5} ± {:.1e}, bound {:.5}", est.value, est.std_error, product_bound(2, 1.0, m, &spec));
        errors.push(est.value);
    }
    let cells: Vec<f64> = ladder.iter().map(|&m| (m * m) as f64).collect();
    println!("log-log slope against cell count: {:.3}", rate_fit(&cells, &errors, 2.0)?);
    Ok(())
}
