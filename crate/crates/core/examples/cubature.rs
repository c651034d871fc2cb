//! Cubature weights from the splitting operator and the second-order error
//! estimate for smooth functions.

use dualquant::cubature::{exact_weights_1d, expect, second_order_report, weights, TestFunction};
use dualquant::distributions::make_uniform_box;
use dualquant::error_metrics::{product_grid, Domain};
use dualquant::geometry::{Grid, NormSpec};
use dualquant::quantizer::DualQuantizer;
use dualquant::rng::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let line = make_uniform_box(&[0.0], &[1.0])?;
    let g = Grid::from_scalars(&[0.0, 0.25, 0.5, 0.75, 1.0])?;
    let exact = exact_weights_1d(&g, &line, Domain::Compact)?;
    let q = DualQuantizer::new(g, NormSpec::quadratic())?;
    let mc = weights(&q, &line, 400_000, &mut RngStream::new(3), false)?;
    println!("exact weights {:?}", exact.weights);
    println!("sampled weights {:?}", mc.weights.iter().map(|w| (w * 1e4).round() / 1e4).collect::<Vec<_>>());
    println!("E cos(X) ≈ {:.6} (true {:.6})", expect(&exact, |x| x[0].cos()), 1f64.sin());

    let square = make_uniform_box(&[0.0, 0.0], &[1.0, 1.0])?;
    let q = DualQuantizer::new(product_grid(&[0.0, 0.0], &[1.0, 1.0], 4)?, NormSpec::quadratic())?;
    for f in [TestFunction::Exp, TestFunction::Cos, TestFunction::Quadratic] {
        let lip = f.gradient_lipschitz(&square.support()).unwrap_or(f64::NAN);
        let r = second_order_report(&q, &square, |x| f.eval(x), lip, 400_000, &mut RngStream::new(4))?;
        println!(
            "{f}: error {:+.2e} ± {:.1e}, bound {:.2e}, {}",
            r.cubature_error,
            r.cubature_std_error,
            r.bound,
            if r.satisfied { "within bound" } else { "bound violated" }
        );
    }
    Ok(())
}
