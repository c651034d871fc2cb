//! Local dual quantization program at a single query, for several norms.

use dualquant::geometry::{Grid, NormKind, NormSpec};
use dualquant::lp_core::{enumerate_bases_oracle, local_dq_solve};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [0.45, 0.4]])?;
    let xi = [0.3, 0.6];
    for (kind, p) in [(NormKind::L2, 2.0), (NormKind::L1, 1.0), (NormKind::Linf, 3.0)] {
        let spec = NormSpec::new(kind, p)?;
        let sol = local_dq_solve(&grid, &xi, &spec)?;
        let oracle = enumerate_bases_oracle(&grid, &xi, &spec)?;
        println!("{kind} p={p}: F = {:.6} (enumeration {:.6})", sol.value, oracle);
        for (i, w) in sol.basis.iter().zip(&sol.weights) {
            println!("    x_{i} = {:?}  weight {w:.4}", grid.point(*i));
        }
        println!("    dual u1 = {:?}, u2 = {:.6}", sol.u1, sol.u2);
    }
    Ok(())
}
