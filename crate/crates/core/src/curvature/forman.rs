use super::EdgeFunction;
use crate::graph::Graph;

/// Forman–Ricci curvature of one edge: `4 - d_u - d_v + 3 * triangles(u, v)`.
pub fn forman_edge(g: &Graph, u: usize, v: usize) -> f64 {
    let triangles = g.common_neighbors(u, v) as i64;
    (4 - g.degree(u) as i64 - g.degree(v) as i64 + 3 * triangles) as f64
}

/// Forman–Ricci curvature on every edge.
pub fn forman(g: &Graph) -> EdgeFunction {
    EdgeFunction::from_sorted(
        g.edges()
            .iter()
            .map(|&(u, v)| ((u, v), forman_edge(g, u, v)))
            .collect(),
    )
}
