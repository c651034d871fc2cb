//! Dual quantization of probability distributions.
//!
//! A grid `Γ` and a query `ξ` in its convex hull define a small linear
//! program whose optimal basis is a simplex of grid points containing `ξ`;
//! its barycentric weights give a stationary random splitting of `ξ` onto
//! the grid. For the squared Euclidean cost the optimal simplices are the
//! Delaunay triangles. On top of that the crate provides error functionals,
//! optimal 1D grids by Newton's method, stochastic training in higher
//! dimensions and the resulting cubature formulas.

pub mod delaunay2d;
pub mod distributions;
pub mod error;
pub mod geometry;
mod linalg;
pub mod lp_core;
pub mod quantizer;
pub mod rng;
mod simplex;
pub mod splitting;
pub mod error_metrics;
pub mod mc;
pub mod optim1d;
pub mod optimnd;
pub mod cubature;
pub mod gridio;
pub mod svg;
pub mod cli;

pub use error::{DqError, Result};
pub use geometry::{Grid, NormKind, NormSpec};
pub use quantizer::DualQuantizer;
pub use rng::RngStream;
