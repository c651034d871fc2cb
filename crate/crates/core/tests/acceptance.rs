//! Acceptance checks. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any of them fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dualquant::cubature;
use dualquant::delaunay2d::{dq_solve_delaunay, incircle, orient2d, triangulate};
use dualquant::distributions::{make_normal, make_uniform_box, DistributionSpec};
use dualquant::error_metrics::{
    exact_1d_dq_error, exact_1d_voronoi_error, mc_dq_error, product_bound, product_grid, rate_fit,
    scalar_bound, theoretical_1d_uniform, voronoi_uniform_optimum, Domain,
};
use dualquant::geometry::{Grid, NormKind, NormSpec};
use dualquant::lp_core::{enumerate_bases_oracle, local_dq_solve, local_dq_value};
use dualquant::mc::{self, DEFAULT_SHARDS};
use dualquant::optim1d::{gradient_1d, newton_solve, NewtonOptions};
use dualquant::optimnd::{self, mc_gradient, Anchors, RefineConfig, TrainConfig};
use dualquant::quantizer::DualQuantizer;
use dualquant::rng::RngStream;
use dualquant::splitting::split;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn unit_square() -> DistributionSpec {
    make_uniform_box(&[0.0, 0.0], &[1.0, 1.0]).unwrap()
}

fn unit_interval() -> DistributionSpec {
    make_uniform_box(&[0.0], &[1.0]).unwrap()
}

fn random_point(rng: &mut RngStream, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.uniform()).collect()
}

/// Random convex combination of the grid points, biased towards a few of them.
fn hull_query(grid: &Grid, rng: &mut RngStream) -> Vec<f64> {
    let w: Vec<f64> = (0..grid.len()).map(|_| -rng.uniform().ln()).collect();
    let s: f64 = w.iter().sum();
    let mut xi = vec![0.0; grid.dim()];
    for (p, wi) in grid.points().zip(&w) {
        for (x, c) in xi.iter_mut().zip(p) {
            *x += wi / s * c;
        }
    }
    xi
}

/// Corners of the unit square followed by `k` uniform interior points.
fn cornered_square(rng: &mut RngStream, k: usize) -> Grid {
    let mut pts = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]];
    for _ in 0..k {
        pts.push(vec![0.05 + 0.9 * rng.uniform(), 0.05 + 0.9 * rng.uniform()]);
    }
    Grid::new(&pts).unwrap().with_pinned(0..4).unwrap()
}

// Brute force over all (d+1)-subsets with a local Gaussian elimination; kept
// separate from the library so the two cannot share a bug.
fn brute_force(points: &[Vec<f64>], xi: &[f64], cost: impl Fn(&[f64]) -> f64) -> Option<f64> {
    let n = points.len();
    let d = xi.len();
    let k = d + 1;
    let mut best: Option<f64> = None;
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        // rows: d coordinates plus the affine constraint
        let mut a = vec![vec![0.0; k + 1]; k];
        for (r, row) in a.iter_mut().enumerate() {
            for (c, &i) in idx.iter().enumerate() {
                row[c] = if r < d { points[i][r] } else { 1.0 };
            }
            row[k] = if r < d { xi[r] } else { 1.0 };
        }
        if let Some(lam) = gauss(a) {
            if lam.iter().all(|&l| l >= -1e-12) {
                let v: f64 = idx.iter().zip(&lam).map(|(&i, &l)| {
                    let diff: Vec<f64> = points[i].iter().zip(xi).map(|(a, b)| a - b).collect();
                    l * cost(&diff)
                }).sum();
                best = Some(best.map_or(v, |b: f64| b.min(v)));
            }
        }
        let mut j = k;
        loop {
            if j == 0 {
                return best;
            }
            j -= 1;
            if idx[j] < n - k + j {
                idx[j] += 1;
                for t in j + 1..k {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
        }
    }
}

fn gauss(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let k = a.len();
    for c in 0..k {
        let p = (c..k).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-10 {
            return None;
        }
        a.swap(c, p);
        for r in 0..k {
            if r != c {
                let f = a[r][c] / a[c][c];
                for cc in c..=k {
                    a[r][cc] -= f * a[c][cc];
                }
            }
        }
    }
    Some((0..k).map(|i| a[i][k] / a[i][i]).collect())
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let dist = unit_interval();
    let mut notes = Vec::new();
    for (n, target) in [(3usize, 1.0 / 24.0), (11, 1.0 / 600.0)] {
        let rep = newton_solve(&dist, n, Domain::Compact, None, NewtonOptions::default()).map_err(e)?;
        let xs = rep.grid.coords();
        let dev = xs.iter().enumerate().map(|(i, x)| (x - i as f64 / (n - 1) as f64).abs()).fold(0.0, f64::max);
        ensure(dev <= 1e-8, format!("n={n}: grid deviation {dev:e}"))?;
        let err_dev = (rep.error - target).abs();
        ensure(err_dev <= 1e-10, format!("n={n}: error {} vs {target}", rep.error))?;
        notes.push(format!("n={n} grid dev {dev:.1e} error dev {err_dev:.1e}"));
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(1), format!("took {t:?}"))?;
    Ok(format!("{}; {t:?}", notes.join(", ")))
}

fn criterion_2() -> Check {
    let n = 101;
    let dist = unit_interval();
    let (g, _) = theoretical_1d_uniform(n, 2.0).map_err(e)?;
    let (v, _) = voronoi_uniform_optimum(n, 2.0).map_err(e)?;
    let dual = exact_1d_dq_error(&g, &dist, Domain::Compact).map_err(e)?;
    let vor = exact_1d_voronoi_error(&v, &dist).map_err(e)?;
    // closed forms: h²/6 with h = 1/(n-1), and 1/(12 n²)
    let h = 1.0 / (n - 1) as f64;
    ensure((dual - h * h / 6.0).abs() <= 1e-15, format!("dual error {dual}"))?;
    ensure((vor - 1.0 / (12.0 * (n * n) as f64)).abs() <= 1e-15, format!("voronoi error {vor}"))?;
    let ratio = (dual / vor).sqrt();
    let rel = (ratio / 2f64.sqrt() - 1.0).abs();
    ensure(rel <= 0.01, format!("ratio {ratio}, relative deviation {rel}"))?;
    Ok(format!("ratio {ratio:.6}, relative deviation from sqrt 2 {rel:.6}"))
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let mut rng = RngStream::new(3);
    let kinds = [NormKind::L1, NormKind::L2, NormKind::Linf];
    let powers = [1.0, 1.5, 2.0, 3.0];
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 500 {
        let d = 1 + (rng.uniform() * 3.0) as usize;
        let n = d + 1 + (rng.uniform() * (8 - d) as f64) as usize;
        let pts: Vec<Vec<f64>> = (0..n).map(|_| random_point(&mut rng, d).iter().map(|x| 4.0 * x - 2.0).collect()).collect();
        let Ok(grid) = Grid::new(&pts) else { continue };
        if grid.affine_dim() < d {
            continue;
        }
        let spec = NormSpec::new(kinds[done % 3], powers[(done / 3) % 4]).map_err(e)?;
        let xi = hull_query(&grid, &mut rng);
        let lp = local_dq_value(&grid, &xi, &spec).map_err(|err| format!("instance {done}: {err}"))?;
        let brute = brute_force(&pts, &xi, |v| spec.cost(v)).ok_or("brute force found no basis")?;
        let lib_oracle = enumerate_bases_oracle(&grid, &xi, &spec).map_err(e)?;
        let rel = (lp - brute).abs() / brute.abs().max(1e-300);
        let rel2 = (lp - lib_oracle).abs() / lib_oracle.abs().max(1e-300);
        worst = worst.max(rel).max(rel2);
        ensure(rel <= 1e-9 || (lp - brute).abs() <= 1e-12, format!("instance {done}: simplex {lp} vs brute force {brute}"))?;
        done += 1;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), format!("took {t:?}"))?;
    Ok(format!("500 instances, worst relative gap {worst:.1e}; {t:?}"))
}

fn criterion_4() -> Check {
    let mut rng = RngStream::new(4);
    let spec = NormSpec::quadratic();
    let mut worst: f64 = 0.0;
    for g in 0..10 {
        let pts: Vec<Vec<f64>> = (0..30).map(|_| random_point(&mut rng, 2)).collect();
        let grid = Grid::new(&pts).map_err(e)?;
        let tri = triangulate(&grid).map_err(e)?;
        for t in tri.triangles() {
            let [a, b, c] = t.map(|i| [grid.point(i)[0], grid.point(i)[1]]);
            ensure(orient2d(a, b, c) > 0, format!("grid {g}: triangle {t:?} not counterclockwise"))?;
            for v in 0..grid.len() {
                if t.contains(&v) {
                    continue;
                }
                let q = [grid.point(v)[0], grid.point(v)[1]];
                ensure(incircle(a, b, c, q) <= 0, format!("grid {g}: point {v} inside circumcircle of {t:?}"))?;
            }
        }
        let mut cursor = 0;
        for _ in 0..200 {
            let xi = hull_query(&grid, &mut rng);
            let fast = dq_solve_delaunay(&grid, &tri, &xi, &mut cursor).map_err(e)?.value;
            let lp = local_dq_solve(&grid, &xi, &spec).map_err(e)?.value;
            let rel = (fast - lp).abs() / lp.abs().max(1e-300);
            worst = worst.max(rel);
            ensure(rel <= 1e-9 || (fast - lp).abs() <= 1e-15, format!("grid {g}: fast path {fast} vs LP {lp}"))?;
        }
    }
    Ok(format!("10 grids x 200 queries, worst relative gap {worst:.1e}, in-circle invariant holds"))
}

fn criterion_5() -> Check {
    let mut rng = RngStream::new(5);
    let grid = cornered_square(&mut rng, 10);
    let q = DualQuantizer::new(grid.clone(), NormSpec::quadratic()).map_err(e)?;
    let mut cursor = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let xi = random_point(&mut rng, 2);
        let sol = q.solve(&xi, &mut cursor).map_err(e)?;
        for k in 0..2 {
            let m: f64 = sol.basis.iter().zip(&sol.weights).map(|(&i, w)| w * grid.point(i)[k]).sum();
            worst = worst.max((m - xi[k]).abs());
        }
    }
    ensure(worst <= 1e-10, format!("barycentric residual {worst:e}"))?;

    let xi = [0.37, 0.61];
    let draws = 100_000;
    let mut sum = [0.0; 2];
    let mut sq = [0.0; 2];
    for _ in 0..draws {
        let o = split(&q, &xi, &mut rng, &mut cursor).map_err(e)?;
        for k in 0..2 {
            let x = grid.point(o.vertex)[k];
            sum[k] += x;
            sq[k] += x * x;
        }
    }
    let mut zs = Vec::new();
    for k in 0..2 {
        let mean = sum[k] / draws as f64;
        let var = sq[k] / draws as f64 - mean * mean;
        let sigma = (var / draws as f64).sqrt();
        let z = (mean - xi[k]).abs() / sigma;
        ensure(z <= 4.0, format!("coordinate {k}: split mean {mean} vs {} ({z:.2} sigma)", xi[k]))?;
        zs.push(z);
    }
    Ok(format!("max residual {worst:.1e}; split mean at {:.2} and {:.2} sigma", zs[0], zs[1]))
}

fn quad(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn criterion_6() -> Check {
    let n = 1_000_000;
    let mut notes = Vec::new();
    let mut rng = RngStream::new(6);
    let cases = [
        ("{0,1}/U[0,1]", Grid::from_scalars(&[0.0, 1.0]).map_err(e)?, unit_interval()),
        ("random grid/U[0,1]^2", cornered_square(&mut rng, 12), unit_square()),
    ];
    for (name, grid, dist) in cases {
        let q = DualQuantizer::new(grid, NormSpec::quadratic()).map_err(e)?;
        let rep = cubature::second_order_report(&q, &dist, quad, 2.0, n, &mut RngStream::new(61)).map_err(e)?;
        let d2 = mc_dq_error(&q, &dist, n, &mut RngStream::new(62), false).map_err(e)?;
        // E|X|² − E|J(X)|² = −E F²(X)
        let gap = (rep.cubature_error + d2.value).abs();
        let sigma = rep.cubature_std_error.hypot(d2.std_error);
        ensure(gap <= 4.0 * sigma, format!("{name}: cubature error {} vs -d² {}", rep.cubature_error, -d2.value))?;
        if name.starts_with("{0,1}") {
            let z = (d2.value - 1.0 / 6.0).abs() / d2.std_error;
            ensure(z <= 4.0, format!("{name}: d² {} vs 1/6", d2.value))?;
        }
        let affine = |x: &[f64]| 3.0 + x.iter().enumerate().map(|(k, v)| (2.0 - 3.0 * k as f64) * v).sum::<f64>();
        let aff = cubature::second_order_report(&q, &dist, affine, 0.0, 200_000, &mut RngStream::new(63)).map_err(e)?;
        let tol = (4.0 * aff.cubature_std_error).max(1e-12);
        ensure(aff.cubature_error.abs() <= tol, format!("{name}: affine error {}", aff.cubature_error))?;
        notes.push(format!("{name} gap {:.2} sigma, affine {:.1e}", gap / sigma, aff.cubature_error));
    }
    Ok(notes.join("; "))
}

fn criterion_7() -> Check {
    let mut rng = RngStream::new(7);
    let samples = 100_000;
    let mut margin = f64::INFINITY;
    for g in 0..20 {
        let n = 2 + (rng.uniform() * 10.0) as usize;
        let mut xs: Vec<f64> = (0..n).map(|_| 10.0 * rng.uniform() - 5.0).collect();
        xs.sort_by(f64::total_cmp);
        let grid = Grid::from_scalars(&xs).map_err(e)?;
        let p = [1.0, 1.5, 2.0, 3.0][g % 4];
        let spec = NormSpec::new(NormKind::L2, p).map_err(e)?;
        let bound = scalar_bound(&grid, p).map_err(e)?;
        let q = DualQuantizer::new(grid, spec).map_err(e)?;
        let mut cursor = 0;
        let mut max = 0.0f64;
        for _ in 0..samples {
            let xi = [xs[0] + (xs[n - 1] - xs[0]) * rng.uniform()];
            max = max.max(q.value(&xi, false, &mut cursor).map_err(e)?);
        }
        ensure(max <= bound * (1.0 + 1e-12), format!("1D grid {g}: max {max} > bound {bound}"))?;
        margin = margin.min(1.0 - max / bound);
    }
    let products = [(2usize, 1usize, NormKind::L2, 2.0), (2, 3, NormKind::L1, 1.5), (3, 2, NormKind::L2, 2.0), (2, 2, NormKind::Linf, 3.0), (3, 1, NormKind::L1, 1.0)];
    for (d, m, kind, p) in products {
        let ell = 2.0;
        let grid = product_grid(&vec![-1.0; d], &vec![1.0; d], m).map_err(e)?;
        let spec = NormSpec::new(kind, p).map_err(e)?;
        let bound = product_bound(d, ell, m, &spec);
        let q = DualQuantizer::new(grid, spec).map_err(e)?;
        let mut cursor = 0;
        let mut max = 0.0f64;
        for _ in 0..samples {
            let xi: Vec<f64> = (0..d).map(|_| 2.0 * rng.uniform() - 1.0).collect();
            max = max.max(q.value(&xi, false, &mut cursor).map_err(e)?);
        }
        ensure(max <= bound * (1.0 + 1e-12), format!("product d={d} m={m} {kind} p={p}: max {max} > bound {bound}"))?;
    }
    let grid = product_grid(&[0.0, 0.0], &[1.0, 1.0], 1).map_err(e)?;
    let spec = NormSpec::quadratic();
    let center = local_dq_value(&grid, &[0.5, 0.5], &spec).map_err(e)?;
    let bound = product_bound(2, 1.0, 1, &spec);
    ensure((center - 0.5).abs() <= 1e-9 && (bound - 0.5).abs() <= 1e-12, format!("center value {center}, bound {bound}"))?;
    Ok(format!("20 scalar and 5 product grids within bounds (tightest 1D margin {margin:.1e}); center value {center}"))
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let dist = unit_square();
    let ladder = [1usize, 2, 4, 8];
    let mut errors = Vec::new();
    for &m in &ladder {
        let q = DualQuantizer::new(product_grid(&[0.0, 0.0], &[1.0, 1.0], m).map_err(e)?, NormSpec::quadratic()).map_err(e)?;
        errors.push(mc_dq_error(&q, &dist, 1_000_000, &mut RngStream::new(8), false).map_err(e)?.value);
    }
    let cells: Vec<f64> = ladder.iter().map(|&m| (m * m) as f64).collect();
    let points: Vec<f64> = ladder.iter().map(|&m| ((m + 1) * (m + 1)) as f64).collect();
    let slope = rate_fit(&cells, &errors, 2.0).map_err(e)?;
    let slope_points = rate_fit(&points, &errors, 2.0).map_err(e)?;
    let t = start.elapsed();
    ensure((slope + 0.5).abs() <= 0.05, format!("slope {slope}"))?;
    ensure(t < Duration::from_secs(120), format!("took {t:?}"))?;
    Ok(format!("slope {slope:.4} against m^2 cells ({slope_points:.4} against (m+1)^2 points); {t:?}"))
}

fn criterion_9() -> Check {
    let dist = unit_interval();
    let mut prev = f64::INFINITY;
    let mut values = Vec::new();
    for n in 3..=10 {
        let rep = newton_solve(&dist, n, Domain::Compact, None, NewtonOptions::default()).map_err(e)?;
        let oracle = 1.0 / (6.0 * ((n - 1) * (n - 1)) as f64);
        ensure((rep.error - oracle).abs() <= 1e-12, format!("n={n}: error {} vs {oracle}", rep.error))?;
        ensure(rep.error < prev, format!("n={n}: {} not below {prev}", rep.error))?;
        prev = rep.error;
        values.push(format!("{:.5}", rep.error));
    }
    Ok(format!("errors {}", values.join(" > ")))
}

fn criterion_10() -> Check {
    let start = Instant::now();
    let dist = unit_square();
    let config = TrainConfig {
        steps: 1_000_000,
        seed: 10,
        anchors: Anchors::Corners,
        refine: Some(RefineConfig::default()),
        ..TrainConfig::default()
    };
    let init = optimnd::initial_grid(&dist, 16, &config).map_err(e)?;
    let first = optimnd::train(&dist, 16, &config).map_err(e)?;
    let elapsed = start.elapsed();
    let second = optimnd::train(&dist, 16, &config).map_err(e)?;
    let bits = |g: &Grid| g.coords().iter().map(|c| c.to_bits()).collect::<Vec<_>>();
    ensure(bits(&first.grid) == bits(&second.grid), "two runs with the same seed differ")?;

    let eval = |g: Grid| -> Result<f64, String> {
        let q = DualQuantizer::new(g, NormSpec::quadratic()).map_err(e)?;
        Ok(mc_dq_error(&q, &dist, 1_000_000, &mut RngStream::new(99), true).map_err(e)?.value)
    };
    let corners = Grid::new(&[[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]).map_err(e)?;
    let (e_init, e_corner, e_final) = (eval(init)?, eval(corners)?, eval(first.grid)?);
    ensure(e_final < e_init, format!("trained {e_final} not below initial {e_init}"))?;
    ensure(e_final < e_corner && e_final < 1.0 / 3.0, format!("trained {e_final} not below corners {e_corner}"))?;
    ensure(elapsed < Duration::from_secs(120), format!("took {elapsed:?}"))?;
    Ok(format!("d² initial {e_init:.5}, corners {e_corner:.5}, trained {e_final:.5}; reproducible; {elapsed:?}"))
}

fn criterion_11() -> Check {
    let h = 1e-3;
    let spec = NormSpec::quadratic();
    let mut rng = RngStream::new(11);
    let grid = cornered_square(&mut rng, 6);
    let dist = unit_square();
    let grad = mc_gradient(&grid, &dist, &spec, 1_000_000, &mut RngStream::new(111), false).map_err(e)?;

    let coords: Vec<usize> = (4 * 2..grid.len() * 2).collect();
    let mut shifted = Vec::new();
    for &c in &coords {
        for s in [h, -h] {
            let mut flat = grid.coords().to_vec();
            flat[c] += s;
            shifted.push(DualQuantizer::new(Grid::from_flat(2, flat).map_err(e)?, spec).map_err(e)?);
        }
    }
    let fd = mc::estimate_vec(coords.len(), 400_000, DEFAULT_SHARDS, &mut RngStream::new(112), |r, st, out| {
        let xi = dist.sample(r);
        for (k, pair) in shifted.chunks(2).enumerate() {
            out[k] = (pair[0].value(&xi, false, &mut st.cursor)? - pair[1].value(&xi, false, &mut st.cursor)?) / (2.0 * h);
        }
        Ok(())
    })
    .map_err(e)?;
    let mut worst_z: f64 = 0.0;
    for (k, &c) in coords.iter().enumerate() {
        let sigma = grad.std_error[c].hypot(fd[k].std_error);
        let z = (grad.mean[c] - fd[k].value).abs() / sigma;
        ensure(z <= 4.0, format!("coordinate {c}: gradient {} vs difference {} ({z:.2} sigma)", grad.mean[c], fd[k].value))?;
        worst_z = worst_z.max(z);
    }

    // one dimension against the closed form, both domains
    let mut worst_1d: f64 = 0.0;
    let cases = [
        (Grid::from_scalars(&[0.0, 0.15, 0.5, 0.62, 0.9, 1.0]).map_err(e)?.with_pinned([0, 5]).map_err(e)?, unit_interval(), Domain::Compact),
        (Grid::from_scalars(&[-1.2, -0.3, 0.4, 1.5]).map_err(e)?, make_normal(&[0.0], 1.0).map_err(e)?, Domain::Extended),
    ];
    for (g, d, domain) in cases {
        let exact = gradient_1d(&g, &d, domain).map_err(e)?;
        let mc = mc_gradient(&g, &d, &spec, 1_000_000, &mut RngStream::new(113), domain == Domain::Extended).map_err(e)?;
        for i in 0..g.len() {
            if g.is_pinned(i) {
                continue;
            }
            let z = (mc.mean[i] - exact[i]).abs() / mc.std_error[i];
            ensure(z <= 4.0, format!("1D {domain} point {i}: {} vs exact {} ({z:.2} sigma)", mc.mean[i], exact[i]))?;
            worst_1d = worst_1d.max(z);
        }
    }
    Ok(format!("2D worst {worst_z:.2} sigma over {} coordinates; 1D worst {worst_1d:.2} sigma", coords.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("1D uniform exact optimum", criterion_1),
        ("dual/Voronoi constant", criterion_2),
        ("LP vs brute-force enumeration", criterion_3),
        ("Delaunay fast path vs LP", criterion_4),
        ("intrinsic stationarity", criterion_5),
        ("second-order cubature", criterion_6),
        ("error bounds", criterion_7),
        ("product-grid rate", criterion_8),
        ("strict decrease in n", criterion_9),
        ("CVLQ improvement", criterion_10),
        ("gradient vs finite differences", criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
