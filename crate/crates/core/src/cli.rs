//! Command-line interface.
//!
//! Exit codes: 0 on success, 1 on numeric failure, 2 on usage errors.
//! `--config FILE` supplies `key=value` defaults for flags of the chosen
//! subcommand; flags given on the command line take precedence.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cubature::{self, TestFunction};
use crate::distributions::DistributionSpec;
use crate::error::{DqError, Result};
use crate::error_metrics::{self, Domain};
use crate::geometry::{Grid, NormKind, NormSpec};
use crate::gridio::{self, GridMeta};
use crate::optim1d::{newton_solve, NewtonOptions};
use crate::optimnd::{self, Anchors, RefineConfig, TrainConfig};
use crate::quantizer::DualQuantizer;
use crate::rng::RngStream;
use crate::svg;

#[derive(Debug, Parser, Serialize)]
#[command(name = "dualquant", version, about = "Dual quantization grids, errors and cubature")]
pub struct Cli {
    /// Master seed for every random quantity.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for Monte Carlo (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Print a machine-readable JSON report on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// File of `key=value` defaults for the subcommand's flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Optimal 1D grid by Newton's method (p = 2).
    Train1d(Train1dArgs),
    /// Multi-dimensional grid by stochastic competitive learning.
    Trainnd(TrainndArgs),
    /// Dual (and optionally Voronoi) quantization error of a grid file.
    Eval(EvalArgs),
    /// Cubature weights and the second-order error check.
    Cubature(CubatureArgs),
    /// Errors over a ladder of grid sizes and the fitted rate.
    RateTable(RateArgs),
    /// Plot a planar grid with its Delaunay edges.
    ExportSvg(SvgArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Compact,
    Extended,
}

impl From<ModeArg> for Domain {
    fn from(m: ModeArg) -> Domain {
        match m {
            ModeArg::Compact => Domain::Compact,
            ModeArg::Extended => Domain::Extended,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PinArg {
    None,
    Corners,
}

#[derive(Debug, Args, Serialize)]
pub struct Train1dArgs {
    #[arg(long)]
    pub dist: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "compact")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    /// Grid file to write (`.json` or `.csv`).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct TrainndArgs {
    #[arg(long)]
    pub dist: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 100_000)]
    pub steps: u64,
    #[arg(long, value_enum, default_value = "none")]
    pub pin: PinArg,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 100.0)]
    pub b: f64,
    #[arg(long, default_value_t = 64)]
    pub retriangulate_every: u64,
    /// Run the Monte Carlo descent after training.
    #[arg(long)]
    pub refine: bool,
    #[arg(long, default_value_t = 200_000)]
    pub refine_samples: u64,
    #[arg(long, default_value_t = 10)]
    pub refine_iters: usize,
    #[arg(long, default_value_t = 100_000)]
    pub eval_samples: u64,
    /// Record the error every k steps.
    #[arg(long, default_value_t = 0)]
    pub trace_every: u64,
    /// CSV file for the error trace.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    #[arg(long)]
    pub grid: PathBuf,
    #[arg(long)]
    pub dist: String,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value = "l2")]
    pub norm: String,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Nearest-neighbour extension outside the grid hull.
    #[arg(long)]
    pub extended: bool,
    /// Closed-form 1D error instead of Monte Carlo (p = 2, l2).
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub compare_voronoi: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CubatureArgs {
    #[arg(long)]
    pub grid: PathBuf,
    #[arg(long)]
    pub dist: String,
    /// `quadratic`, `exp`, `cos` or `poly:c0,c1,…` applied coordinatewise and summed.
    #[arg(long, default_value = "quadratic")]
    pub f: String,
    /// Lipschitz constant of the gradient; derived from the support if omitted.
    #[arg(long)]
    pub lip: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long)]
    pub extended: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LadderKind {
    /// Exact optimal grids for U([0,1]); ladder values are n.
    Uniform1d,
    /// Newton-trained grids for `--dist`; ladder values are n.
    Newton1d,
    /// Product grids on `[0,1]^dim` under the uniform law; ladder values are m.
    Product,
}

#[derive(Debug, Args, Serialize)]
pub struct RateArgs {
    #[arg(long, value_enum, default_value = "uniform1d")]
    pub kind: LadderKind,
    #[arg(long, value_delimiter = ',', default_values_t = [5usize, 9, 17])]
    pub ladder: Vec<usize>,
    #[arg(long, default_value = "uniform:0,1")]
    pub dist: String,
    #[arg(long, value_enum, default_value = "compact")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// CSV file for the table (printed to stdout otherwise).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SvgArgs {
    #[arg(long)]
    pub grid: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub hull: bool,
    #[arg(long)]
    pub title: Option<String>,
}

fn exit_code(e: &DqError) -> i32 {
    match e {
        DqError::Parse(_)
        | DqError::InvalidArgument(_)
        | DqError::Io(_)
        | DqError::DimensionMismatch { .. }
        | DqError::MissingAnalytics
        | DqError::UnboundedSupport
        | DqError::SupportNotCovered => 2,
        _ => 1,
    }
}

const SUBCOMMANDS: [&str; 6] = ["train1d", "trainnd", "eval", "cubature", "rate-table", "export-svg"];

/// Insert `--key value` pairs from the config file right after the
/// subcommand name unless the flag is already present.
fn apply_config(args: Vec<String>) -> Result<Vec<String>> {
    let pos = args.iter().position(|a| a == "--config");
    let path = match pos.and_then(|i| args.get(i + 1)) {
        Some(p) => p.clone(),
        None => return Ok(args),
    };
    let text = fs::read_to_string(&path)?;
    let sub = args.iter().position(|a| SUBCOMMANDS.contains(&a.as_str()));
    let Some(sub) = sub else { return Ok(args) };
    let mut extra = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| DqError::Parse(format!("{path}:{}: expected key=value", lineno + 1)))?;
        let flag = format!("--{}", k.trim().replace('_', "-"));
        if args.iter().any(|a| a == &flag || a.starts_with(&format!("{flag}="))) {
            continue;
        }
        match v.trim() {
            "true" => extra.push(flag),
            "false" => {}
            v => {
                extra.push(flag);
                extra.push(v.to_string());
            }
        }
    }
    let mut out = args[..=sub].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[sub + 1..]);
    Ok(out)
}

/// Run the CLI on `args` (including the program name).
pub fn run<W: Write, E: Write>(args: Vec<String>, out: &mut W, err: &mut E) -> i32 {
    let args = match apply_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    if let Some(t) = cli.threads {
        // a pool may already exist when called repeatedly in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let _ = writeln!(err, "config: {}", serde_json::to_string(&cli).unwrap_or_default());
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch<W: Write>(cli: &Cli, out: &mut W) -> Result<()> {
    let report = match &cli.command {
        Command::Train1d(a) => train1d(a)?,
        Command::Trainnd(a) => trainnd(a, cli.seed)?,
        Command::Eval(a) => eval(a, cli.seed)?,
        Command::Cubature(a) => cubature(a, cli.seed)?,
        Command::RateTable(a) => rate_table(a, cli.seed)?,
        Command::ExportSvg(a) => export_svg(a)?,
    };
    let text = if cli.json {
        serde_json::to_string_pretty(&report).map_err(|e| DqError::Io(e.to_string()))?
    } else {
        human(&report, 0)
    };
    writeln!(out, "{text}")?;
    Ok(())
}

fn human(v: &Value, indent: usize) -> String {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| match v {
                Value::Object(_) => format!("{pad}{k}:\n{}", human(v, indent + 1)),
                _ => format!("{pad}{k}: {}", human(v, 0)),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        Value::Array(a) => {
            let parts: Vec<String> = a.iter().map(|x| human(x, 0)).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn grid_json(g: &Grid) -> Value {
    json!(g.points().map(<[f64]>::to_vec).collect::<Vec<_>>())
}

fn write_out(path: &Option<PathBuf>, grid: &Grid, meta: GridMeta) -> Result<()> {
    if let Some(p) = path {
        gridio::write_grid(p, grid, &meta)?;
    }
    Ok(())
}

fn train1d(a: &Train1dArgs) -> Result<Value> {
    if a.p != 2.0 {
        return Err(DqError::InvalidArgument("train1d supports p = 2 only".into()));
    }
    let dist = DistributionSpec::parse(&a.dist)?;
    let mode = Domain::from(a.mode);
    let r = newton_solve(&dist, a.n, mode, None, NewtonOptions { tol: a.tol, max_iter: a.max_iter })?;
    let meta = GridMeta { distribution: Some(dist.to_string()), p: Some(2.0), norm: Some(NormKind::L2) };
    write_out(&a.out, &r.grid, meta)?;
    Ok(json!({
        "command": "train1d",
        "distribution": dist.to_string(),
        "mode": mode,
        "n": a.n,
        "grid": r.grid.coords(),
        "error": r.error,
        "iterations": r.iterations,
        "final_gradient_norm": r.final_gradient_norm,
        "converged": r.converged,
    }))
}

fn trainnd(a: &TrainndArgs, seed: u64) -> Result<Value> {
    let dist = DistributionSpec::parse(&a.dist)?;
    let cfg = TrainConfig {
        steps: a.steps,
        a: a.a,
        b: a.b,
        seed,
        anchors: match a.pin {
            PinArg::None => Anchors::None,
            PinArg::Corners => Anchors::Corners,
        },
        retriangulate_every: a.retriangulate_every,
        refine: a.refine.then_some(RefineConfig { mc_samples: a.refine_samples, descent_iters: a.refine_iters }),
        trace_every: a.trace_every,
        eval_samples: a.eval_samples,
        eval_seed: seed.wrapping_add(1),
        spec: NormSpec::quadratic(),
    };
    let r = optimnd::train(&dist, a.n, &cfg)?;
    let q = DualQuantizer::new(r.grid.clone(), cfg.spec)?;
    let fin = error_metrics::mc_dq_error(&q, &dist, a.eval_samples, &mut RngStream::new(cfg.eval_seed), true)?;
    if let Some(path) = &a.trace {
        let mut s = String::from("step,value,std_error,n_samples\n");
        for t in &r.error_trace {
            s += &format!("{},{},{},{}\n", t.step, t.estimate.value, t.estimate.std_error, t.estimate.n_samples);
        }
        fs::write(path, s)?;
    }
    let meta = GridMeta { distribution: Some(dist.to_string()), p: Some(2.0), norm: Some(NormKind::L2) };
    write_out(&a.out, &r.grid, meta)?;
    Ok(json!({
        "command": "trainnd",
        "distribution": dist.to_string(),
        "n": a.n,
        "config": cfg,
        "grid": grid_json(&r.grid),
        "pinned": r.grid.pinned(),
        "outside_fraction": r.outside_fraction,
        "final_error": fin,
        "error_trace": r.error_trace,
    }))
}

fn load(path: &Path) -> Result<Grid> {
    Ok(gridio::read_grid(path)?.0)
}

fn eval(a: &EvalArgs, seed: u64) -> Result<Value> {
    let grid = load(&a.grid)?;
    let dist = DistributionSpec::parse(&a.dist)?;
    let kind: NormKind = a.norm.parse()?;
    let spec = NormSpec::new(kind, a.p)?;
    let mut report = if a.exact {
        if !spec.is_quadratic_euclidean() {
            return Err(DqError::InvalidArgument("--exact needs p = 2 and l2".into()));
        }
        let domain = if a.extended { Domain::Extended } else { Domain::Compact };
        let v = error_metrics::exact_1d_dq_error(&grid, &dist, domain)?;
        json!({ "value": v, "std_error": 0.0, "n_samples": 0 })
    } else {
        let q = DualQuantizer::new(grid.clone(), spec)?;
        let e = error_metrics::mc_dq_error(&q, &dist, a.samples, &mut RngStream::new(seed), a.extended)?;
        json!({ "value": e.value, "std_error": e.std_error, "n_samples": e.n_samples })
    };
    report["p"] = json!(a.p);
    report["norm"] = json!(kind);
    report["extended"] = json!(a.extended);
    if a.compare_voronoi {
        let v = if a.exact {
            let e = error_metrics::exact_1d_voronoi_error(&grid, &dist)?;
            json!({ "value": e, "std_error": 0.0 })
        } else {
            let e = error_metrics::mc_voronoi_error(&grid, &dist, &spec, a.samples, &mut RngStream::new(seed))?;
            json!({ "value": e.value, "std_error": e.std_error })
        };
        report["voronoi"] = v;
    }
    Ok(report)
}

fn cubature(a: &CubatureArgs, seed: u64) -> Result<Value> {
    let grid = load(&a.grid)?;
    let dist = DistributionSpec::parse(&a.dist)?;
    let f = TestFunction::parse(&a.f)?;
    let q = DualQuantizer::new(grid, NormSpec::quadratic())?;
    let table = cubature::weights(&q, &dist, a.samples, &mut RngStream::new(seed), a.extended)?;
    let value = cubature::expect(&table, |x| f.eval(x));
    let mut report = json!({
        "f": f.to_string(),
        "cubature_value": value,
        "weights": table.weights,
        "weight_std_error": table.std_error,
        "n_samples": table.n_samples,
    });
    let lip = a.lip.or_else(|| f.gradient_lipschitz(&dist.support()));
    if let (Some(lip), false) = (lip, a.extended) {
        let r = cubature::second_order_report(&q, &dist, |x| f.eval(x), lip, a.samples, &mut RngStream::new(seed ^ 1))?;
        report["second_order"] = serde_json::to_value(r).map_err(|e| DqError::Io(e.to_string()))?;
        report["lipschitz"] = json!(lip);
    }
    Ok(report)
}

fn rate_table(a: &RateArgs, seed: u64) -> Result<Value> {
    if a.ladder.len() < 3 {
        return Err(DqError::InvalidArgument("the ladder needs at least 3 sizes".into()));
    }
    let p = 2.0;
    let mut rows = Vec::new();
    for &k in &a.ladder {
        // (n, number of cells, error d^p, dimension)
        let row = match a.kind {
            LadderKind::Uniform1d => {
                let (g, _) = error_metrics::theoretical_1d_uniform(k, p)?;
                let u = DistributionSpec::parse("uniform:0,1")?;
                (k, k - 1, error_metrics::exact_1d_dq_error(&g, &u, Domain::Compact)?, 1)
            }
            LadderKind::Newton1d => {
                let dist = DistributionSpec::parse(&a.dist)?;
                let r = newton_solve(&dist, k, a.mode.into(), None, NewtonOptions::default())?;
                (k, k - 1, r.error, 1)
            }
            LadderKind::Product => {
                let d = a.dim;
                let (lo, hi) = (vec![0.0; d], vec![1.0; d]);
                let g = error_metrics::product_grid(&lo, &hi, k)?;
                let u = crate::distributions::make_uniform_box(&lo, &hi)?;
                let q = DualQuantizer::new(g.clone(), NormSpec::quadratic())?;
                let e = error_metrics::mc_dq_error(&q, &u, a.samples, &mut RngStream::new(seed), false)?;
                (g.len(), k.pow(d as u32), e.value, d)
            }
        };
        rows.push(row);
    }
    let mut csv = String::from("n,cells,d_root,n_pow_d_root\n");
    for &(n, cells, e, d) in &rows {
        let root = e.powf(1.0 / p);
        csv += &format!("{n},{cells},{root},{}\n", (n as f64).powf(1.0 / d as f64) * root);
    }
    let errs: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let cells: Vec<f64> = rows.iter().map(|r| r.1 as f64).collect();
    let sizes: Vec<f64> = rows.iter().map(|r| r.0 as f64).collect();
    let slope_cells = error_metrics::rate_fit(&cells, &errs, p)?;
    let slope_n = error_metrics::rate_fit(&sizes, &errs, p)?;
    if let Some(path) = &a.out {
        fs::write(path, &csv)?;
    }
    Ok(json!({
        "command": "rate-table",
        "slope": slope_cells,
        "slope_vs_n": slope_n,
        "table": csv,
    }))
}

fn export_svg(a: &SvgArgs) -> Result<Value> {
    let grid = load(&a.grid)?;
    if grid.dim() != 2 {
        return Err(DqError::DimensionMismatch { expected: 2, got: grid.dim() });
    }
    let tri = crate::delaunay2d::triangulate(&grid)?;
    let text = svg::render(&grid, Some(&tri), &svg::SvgOptions { title: a.title.clone(), hull: a.hull })?;
    fs::write(&a.out, text)?;
    let data = a.out.with_extension("csv");
    fs::write(&data, gridio::to_csv(&grid)?)?;
    Ok(json!({
        "svg": a.out.display().to_string(),
        "data": data.display().to_string(),
        "points": grid.len(),
        "edges": tri.edges().len(),
    }))
}
