use proptest::prelude::*;

use dualquant::delaunay2d::{dq_solve_delaunay, triangulate};
use dualquant::distributions::make_normal;
use dualquant::geometry::{Grid, NormKind, NormSpec};
use dualquant::gridio::{from_csv, from_json, to_csv, to_json, GridMeta};
use dualquant::lp_core::{local_dq_solve, nearest_index};
use dualquant::splitting::select_vertex;

fn grid_2d() -> impl Strategy<Value = Grid> {
    prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 4..14).prop_filter_map("degenerate grid", |pts| {
        let pts: Vec<[f64; 2]> = pts.into_iter().map(|(x, y)| [x, y]).collect();
        let g = Grid::new(&pts).ok()?;
        // keep away from nearly coincident points
        for i in 0..pts.len() {
            for j in 0..i {
                if (pts[i][0] - pts[j][0]).hypot(pts[i][1] - pts[j][1]) < 1e-3 {
                    return None;
                }
            }
        }
        (g.affine_dim() == 2).then_some(g)
    })
}

fn weights() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, 14)
}

fn combine(grid: &Grid, w: &[f64]) -> Vec<f64> {
    let w = &w[..grid.len()];
    let s: f64 = w.iter().sum::<f64>() + 1e-9;
    let mut xi = vec![0.0; grid.dim()];
    for (p, wi) in grid.points().zip(w) {
        for (x, c) in xi.iter_mut().zip(p) {
            *x += (wi + 1e-9 / w.len() as f64) / s * c;
        }
    }
    xi
}

fn spec() -> impl Strategy<Value = NormSpec> {
    (prop_oneof![Just(NormKind::L1), Just(NormKind::L2), Just(NormKind::Linf)], 1.0f64..4.0)
        .prop_map(|(k, p)| NormSpec::new(k, p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn local_solution_is_a_stationary_split(grid in grid_2d(), w in weights(), spec in spec()) {
        let xi = combine(&grid, &w);
        let sol = local_dq_solve(&grid, &xi, &spec).unwrap();
        prop_assert!((sol.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(sol.weights.iter().all(|&l| l >= -1e-12));
        for k in 0..2 {
            let m: f64 = sol.basis.iter().zip(&sol.weights).map(|(&i, l)| l * grid.point(i)[k]).sum();
            prop_assert!((m - xi[k]).abs() < 1e-10);
        }
        // the dual optimum reproduces the primal value
        prop_assert!((sol.dual_value(&xi) - sol.value).abs() <= 1e-9 * (1.0 + sol.value.abs()));
    }

    #[test]
    fn dual_error_dominates_nearest_neighbour(grid in grid_2d(), w in weights(), spec in spec()) {
        let xi = combine(&grid, &w);
        let sol = local_dq_solve(&grid, &xi, &spec).unwrap();
        let nn = spec.dist_p(&xi, grid.point(nearest_index(&grid, &xi, &spec)));
        prop_assert!(sol.value >= nn - 1e-12);
    }

    #[test]
    fn delaunay_matches_lp(grid in grid_2d(), w in weights()) {
        let xi = combine(&grid, &w);
        let tri = triangulate(&grid).unwrap();
        let mut cursor = 0;
        let fast = dq_solve_delaunay(&grid, &tri, &xi, &mut cursor).unwrap().value;
        let lp = local_dq_solve(&grid, &xi, &NormSpec::quadratic()).unwrap().value;
        prop_assert!((fast - lp).abs() <= 1e-9 * lp.max(1e-6));
    }

    #[test]
    fn selected_vertex_has_positive_weight(w in prop::collection::vec(0.0f64..1.0, 1..6), u in 0.0f64..1.0) {
        prop_assume!(w.iter().any(|&x| x > 0.0));
        let s: f64 = w.iter().sum();
        let w: Vec<f64> = w.iter().map(|x| x / s).collect();
        let k = select_vertex(&w, u);
        prop_assert!(w[k] > 0.0);
    }

    #[test]
    fn grid_files_round_trip(coords in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO, 3..30)) {
        let d = 3;
        let coords = coords[..coords.len() / d * d].to_vec();
        let Ok(grid) = Grid::from_flat(d, coords) else { return Ok(()) };
        let bits = |g: &Grid| g.coords().iter().map(|c| c.to_bits()).collect::<Vec<_>>();
        let (back, _) = from_json(&to_json(&grid, &GridMeta::default()).unwrap()).unwrap();
        prop_assert_eq!(bits(&back), bits(&grid));
        prop_assert_eq!(bits(&from_csv(&to_csv(&grid).unwrap()).unwrap()), bits(&grid));
    }

    #[test]
    fn partial_moments_are_additive(a in -4.0f64..4.0, b in -4.0f64..4.0, c in -4.0f64..4.0, k in 0u32..3) {
        let dist = make_normal(&[0.2], 1.3).unwrap();
        let whole = dist.partial_moment(k, a, c).unwrap();
        let split = dist.partial_moment(k, a, b).unwrap() + dist.partial_moment(k, b, c).unwrap();
        prop_assert!((whole - split).abs() < 1e-12);
    }
}
