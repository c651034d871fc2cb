//! Writing, reading and plotting grids.

use dualquant::delaunay2d::triangulate;
use dualquant::error_metrics::product_grid;
use dualquant::geometry::NormKind;
use dualquant::gridio::{read_grid, write_grid, GridMeta};
use dualquant::svg::{render, SvgOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("dualquant-example");
    std::fs::create_dir_all(&dir)?;
    let grid = product_grid(&[0.0, 0.0], &[1.0, 1.0], 3)?.with_pinned([0, 3, 12, 15])?;
    let meta = GridMeta { distribution: Some("uniform2d".into()), p: Some(2.0), norm: Some(NormKind::L2) };

    let json = dir.join("grid.json");
    let csv = dir.join("grid.csv");
    write_grid(&json, &grid, &meta)?;
    write_grid(&csv, &grid, &meta)?;
    let (back, m) = read_grid(&json)?;
    println!("json: {} points, pinned {:?}, meta {:?}", back.len(), back.pinned(), m);
    println!("csv:  {} points (pinned set and metadata are not stored)", read_grid(&csv)?.0.len());

    let tri = triangulate(&grid)?;
    let svg = render(&grid, Some(&tri), &SvgOptions { title: Some("4 x 4 product grid".into()), hull: true })?;
    let out = dir.join("grid.svg");
    std::fs::write(&out, svg)?;
    println!("wrote {}", out.display());
    Ok(())
}
