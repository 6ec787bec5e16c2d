//! Discrete edge curvatures: Forman–Ricci, Ollivier–Ricci and resistance.

mod edge_function;
mod forman;
mod measure;
mod ollivier;
mod resistance;
mod transport;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use edge_function::EdgeFunction;
pub use forman::{forman, forman_edge};
pub use measure::{node_measure, MeasureConfig, MeasureKind, NodeMeasure};
pub use ollivier::{ollivier_ricci, ollivier_ricci_pairs, OllivierContext};
pub use resistance::{resistance_curvature, resistance_curvature_with, resistance_data, ResistanceData};
pub use transport::{jump, min_cost_transport, wasserstein1};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurvatureKind {
    Frc,
    Orc,
    Rec,
}

impl CurvatureKind {
    pub const ALL: [CurvatureKind; 3] = [CurvatureKind::Frc, CurvatureKind::Orc, CurvatureKind::Rec];
}

impl fmt::Display for CurvatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurvatureKind::Frc => "frc",
            CurvatureKind::Orc => "orc",
            CurvatureKind::Rec => "rec",
        })
    }
}

impl FromStr for CurvatureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "frc" | "forman" => Ok(CurvatureKind::Frc),
            "orc" | "ollivier" => Ok(CurvatureKind::Orc),
            "rec" | "resistance" => Ok(CurvatureKind::Rec),
            _ => Err(Error::Domain(format!("unknown curvature `{s}`"))),
        }
    }
}

/// Edge curvature of the requested kind. `cfg` only matters for ORC.
pub fn curvature(g: &Graph, kind: CurvatureKind, cfg: &MeasureConfig) -> Result<EdgeFunction> {
    match kind {
        CurvatureKind::Frc => Ok(forman(g)),
        CurvatureKind::Orc => ollivier_ricci(g, cfg),
        CurvatureKind::Rec => Ok(resistance_curvature(g)),
    }
}
