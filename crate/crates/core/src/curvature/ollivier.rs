use rayon::prelude::*;

use super::measure::{node_measure, MeasureConfig, NodeMeasure};
use super::transport::wasserstein1;
use super::EdgeFunction;
use crate::error::{Error, Result};
use crate::graph::{ordered, shortest_path_matrix, DistanceMatrix, Edge, Graph};

/// Everything needed to evaluate Ollivier–Ricci curvature on a graph.
///
/// Holds the hop-distance matrix and the measure of every non-isolated
/// vertex so repeated pair queries do not rebuild them.
pub struct OllivierContext<'g> {
    graph: &'g Graph,
    dist: DistanceMatrix,
    measures: Vec<Option<NodeMeasure>>,
}

impl<'g> OllivierContext<'g> {
    pub fn new(graph: &'g Graph, cfg: &MeasureConfig) -> Result<Self> {
        cfg.validate()?;
        let measures = (0..graph.n())
            .map(|v| {
                if graph.degree(v) == 0 {
                    Ok(None)
                } else {
                    node_measure(graph, v, cfg).map(Some)
                }
            })
            .collect::<Result<_>>()?;
        Ok(OllivierContext {
            graph,
            dist: shortest_path_matrix(graph),
            measures,
        })
    }

    pub fn distances(&self) -> &DistanceMatrix {
        &self.dist
    }

    pub fn measure(&self, v: usize) -> Result<&NodeMeasure> {
        self.measures
            .get(v)
            .and_then(Option::as_ref)
            .ok_or(Error::DegenerateMeasure(v))
    }

    /// W1 between the measures at `i` and `j`.
    pub fn transport_cost(&self, i: usize, j: usize) -> Result<f64> {
        wasserstein1(self.measure(i)?, self.measure(j)?, &self.dist)
    }

    /// `1 - W1(mu_i, mu_j) / d(i, j)`.
    pub fn curvature(&self, i: usize, j: usize) -> Result<f64> {
        if i == j || i >= self.graph.n() || j >= self.graph.n() {
            return Err(Error::Domain(format!("invalid vertex pair ({i}, {j})")));
        }
        let d = self.dist.get(i, j);
        if !d.is_finite() {
            return Err(Error::Disconnected(i, j));
        }
        Ok(1.0 - self.transport_cost(i, j)? / d)
    }
}

/// Ollivier–Ricci curvature on every edge of `g`.
pub fn ollivier_ricci(g: &Graph, cfg: &MeasureConfig) -> Result<EdgeFunction> {
    let ctx = OllivierContext::new(g, cfg)?;
    let values: Vec<(Edge, f64)> = g
        .edges()
        .par_iter()
        .map(|&(u, v)| ctx.curvature(u, v).map(|k| ((u, v), k)))
        .collect::<Result<_>>()?;
    Ok(EdgeFunction::from_sorted(values))
}

/// Ollivier–Ricci curvature on arbitrary vertex pairs (edges or not).
pub fn ollivier_ricci_pairs(
    g: &Graph,
    cfg: &MeasureConfig,
    pairs: &[(usize, usize)],
) -> Result<EdgeFunction> {
    let ctx = OllivierContext::new(g, cfg)?;
    let values: Vec<(Edge, f64)> = pairs
        .par_iter()
        .map(|&(u, v)| ctx.curvature(u, v).map(|k| (ordered(u, v), k)))
        .collect::<Result<_>>()?;
    EdgeFunction::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named_graph;
    use approx::assert_abs_diff_eq;

    #[test]
    fn closed_forms_uniform() {
        let cfg = MeasureConfig::uniform();
        for (name, edge, want) in [
            ("k3", (0, 1), 0.5),
            ("path3", (0, 1), 0.0),
            ("c4", (0, 1), 0.0),
            ("c4", (0, 3), 0.0),
        ] {
            let f = ollivier_ricci(&named_graph(name).unwrap(), &cfg).unwrap();
            assert_abs_diff_eq!(f.get(edge.0, edge.1).unwrap(), want, epsilon = 1e-9);
        }
        let k2 = Graph::new(2, [(0, 1)]).unwrap();
        // The Dirac at 1 moves onto 0: cost 1.
        assert_abs_diff_eq!(
            ollivier_ricci(&k2, &cfg).unwrap().get(0, 1).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn non_edge_pairs() {
        let g = named_graph("c6").unwrap();
        let f = ollivier_ricci_pairs(&g, &MeasureConfig::uniform(), &[(0, 3), (1, 3)]).unwrap();
        // Antipodal on C6: neighbours {1,5} to {2,4}, each moves distance 1.
        assert_abs_diff_eq!(f.get(0, 3).unwrap(), 1.0 - 1.0 / 3.0, epsilon = 1e-12);
        // d(1,3) = 2, neighbours {0,2} and {2,4}: W1 = 1.
        assert_abs_diff_eq!(f.get(1, 3).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn cross_component_pair_errors() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            ollivier_ricci_pairs(&g, &MeasureConfig::uniform(), &[(0, 2)]),
            Err(Error::Disconnected(0, 2))
        ));
        // Edges within components still work.
        assert_eq!(ollivier_ricci(&g, &MeasureConfig::uniform()).unwrap().len(), 2);
    }
}
