//! Optimal one-dimensional dual grids by Newton's method.

use dualquant::distributions::{make_exponential, make_normal, make_uniform_box};
use dualquant::error_metrics::Domain;
use dualquant::optim1d::{newton_solve, NewtonOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("U[0,1]", make_uniform_box(&[0.0], &[1.0])?, Domain::Compact),
        ("N(0,1)", make_normal(&[0.0], 1.0)?, Domain::Extended),
        ("Exp(1)", make_exponential(1.0)?, Domain::Extended),
    ];
    for (name, dist, mode) in cases {
        for n in [5, 10] {
            let rep = newton_solve(&dist, n, mode, None, NewtonOptions::default())?;
            let xs: Vec<String> = rep.grid.coords().iter().map(|x| format!("{x:.4}")).collect();
            println!("{name} n={n} ({mode}): error {:.6e} after {} iterations", rep.error, rep.iterations);
            println!("    [{}]", xs.join(", "));
        }
    }
    Ok(())
}
