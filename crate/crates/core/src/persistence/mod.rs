//! Sublevel edge filtrations, persistence diagrams and bottleneck distances.

mod bottleneck;
mod bounds;
mod diagram;
mod filtration;

pub use bottleneck::{bottleneck, bottleneck_all, bottleneck_pairs, BottleneckDistance};
pub use bounds::{diagram_bound_lower, diagram_bound_upper};
pub use diagram::{betti_oracle, persistence_diagram, Pair, PersistenceDiagram};
pub use filtration::{build_filtration, Filtration};

use crate::curvature::EdgeFunction;
use crate::error::Result;
use crate::graph::Graph;

/// Diagram of the sublevel filtration of `f` on `g`.
pub fn diagram_of(g: &Graph, f: &EdgeFunction) -> Result<PersistenceDiagram> {
    Ok(persistence_diagram(&build_filtration(g, f)?))
}
