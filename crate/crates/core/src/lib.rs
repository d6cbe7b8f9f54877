//! Exact intersection theory on toric variety bundles.

pub mod algebra;
pub mod chow;
pub mod commands;
pub mod error;
pub mod expr;
pub mod fan;
pub mod fraction;
pub mod lattice;
pub mod minkowski;
pub mod piecewise;
pub mod poly;
pub mod polyhedron;
pub mod problem;
pub mod qlinalg;

pub use error::{Error, Result};
