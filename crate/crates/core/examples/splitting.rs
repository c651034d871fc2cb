//! The splitting operator: random vertex draws whose mean is the query.

use dualquant::geometry::{Grid, NormSpec};
use dualquant::quantizer::DualQuantizer;
use dualquant::rng::RngStream;
use dualquant::splitting::{split, split_extended};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(&[[0.0, 0.0], [2.0, 0.0], [0.0, 2.0], [2.0, 2.0], [1.2, 0.7]])?;
    let q = DualQuantizer::new(grid.clone(), NormSpec::quadratic())?;
    let mut rng = RngStream::new(9);
    let mut cursor = 0;

    let xi = [0.8, 1.1];
    let sol = q.solve(&xi, &mut cursor)?;
    println!("weights at {xi:?}: {:?} on {:?}", sol.weights, sol.basis);

    let draws = 200_000;
    let mut mean = [0.0; 2];
    for _ in 0..draws {
        let o = split(&q, &xi, &mut rng, &mut cursor)?;
        for (m, c) in mean.iter_mut().zip(grid.point(o.vertex)) {
            *m += c / draws as f64;
        }
    }
    println!("mean of {draws} splits: [{:.4}, {:.4}]", mean[0], mean[1]);

    // outside the hull the extended operator falls back to the nearest point
    let o = split_extended(&q, &[3.0, -1.0], &mut rng, &mut cursor)?;
    println!("split of (3, -1): vertex {} ({:?}), {:?}", o.vertex, grid.point(o.vertex), o.mode);
    Ok(())
}
