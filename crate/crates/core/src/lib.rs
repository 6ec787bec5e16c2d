//! Curvature filtrations for comparing distributions of graphs.
//!
//! The pipeline runs graph → edge curvature → sublevel persistence diagram
//! → persistence landscape, then averages landscapes per graph set and
//! measures the distance between the averages. The `stats` module wraps it
//! into the experiment harnesses (permutation tests, perturbation sweeps,
//! pairwise distinguishability, clustering and stability-bound checks).

pub mod curvature;
pub mod error;
pub mod graph;
pub mod landscape;
pub mod persistence;
pub mod report;
pub mod stats;

pub use error::{Error, Result};
