use crate::curvature::EdgeFunction;
use crate::error::Result;
use crate::graph::{Edge, Graph};

/// Edges of a graph in sublevel order.
///
/// Ascending by function value, ties broken lexicographically by `(u, v)`.
/// A vertex enters with its first incident edge; isolated vertices never do.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    n: usize,
    steps: Vec<(Edge, f64)>,
    vertex_entry: Vec<Option<f64>>,
}

impl Filtration {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> &[(Edge, f64)] {
        &self.steps
    }

    pub fn vertex_entry(&self, v: usize) -> Option<f64> {
        self.vertex_entry[v]
    }

    /// Builds the filtration from explicitly ordered steps. The order must be
    /// non-decreasing in value; any such order yields the same diagram.
    pub fn from_ordered_steps(n: usize, steps: Vec<(Edge, f64)>) -> Self {
        debug_assert!(steps.windows(2).all(|w| w[0].1 <= w[1].1));
        let mut vertex_entry: Vec<Option<f64>> = vec![None; n];
        for &((u, v), x) in &steps {
            for w in [u, v] {
                let slot = &mut vertex_entry[w];
                *slot = Some(slot.map_or(x, |y| y.min(x)));
            }
        }
        Filtration {
            n,
            steps,
            vertex_entry,
        }
    }
}

pub fn build_filtration(g: &Graph, f: &EdgeFunction) -> Result<Filtration> {
    f.check_domain(g)?;
    let mut steps = f.entries().to_vec();
    // Entries are already lexicographic; a stable sort keeps that for ties.
    steps.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(Filtration::from_ordered_steps(g.n(), steps))
}
