//! Competitive learning of a 16-point grid on the unit square with the
//! corners held fixed, followed by a short refinement.

use dualquant::distributions::make_uniform_box;
use dualquant::error_metrics::mc_dq_error;
use dualquant::geometry::NormSpec;
use dualquant::optimnd::{initial_grid, train, Anchors, RefineConfig, TrainConfig};
use dualquant::quantizer::DualQuantizer;
use dualquant::rng::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dist = make_uniform_box(&[0.0, 0.0], &[1.0, 1.0])?;
    let config = TrainConfig {
        steps: 200_000,
        seed: 5,
        anchors: Anchors::Corners,
        refine: Some(RefineConfig::default()),
        trace_every: 50_000,
        eval_samples: 50_000,
        ..TrainConfig::default()
    };
    let start = initial_grid(&dist, 16, &config)?;
    let report = train(&dist, 16, &config)?;
    for t in &report.error_trace {
        println!("step {:>7}: d² ≈ {:.5}", t.step, t.estimate.value);
    }
    let eval = |g| -> Result<f64, Box<dyn std::error::Error>> {
        let q = DualQuantizer::new(g, NormSpec::quadratic())?;
        Ok(mc_dq_error(&q, &dist, 500_000, &mut RngStream::new(77), true)?.value)
    };
    println!("initial grid d² = {:.5}", eval(start)?);
    println!("trained grid d² = {:.5}", eval(report.grid.clone())?);
    for (i, p) in report.grid.points().enumerate() {
        println!("  {i:>2} [{:.4}, {:.4}]{}", p[0], p[1], if report.grid.is_pinned(i) { " pinned" } else { "" });
    }
    Ok(())
}
