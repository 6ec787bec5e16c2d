use nalgebra::DMatrix;

use super::EdgeFunction;
use crate::graph::Graph;

/// Effective resistances and node resistance curvatures of a graph with
/// unit edge resistances.
#[derive(Debug, Clone, PartialEq)]
pub struct ResistanceData {
    n: usize,
    r: Vec<f64>,
    p: Vec<f64>,
}

impl ResistanceData {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Effective resistance between `i` and `j`; `+inf` across components.
    pub fn resistance(&self, i: usize, j: usize) -> f64 {
        self.r[i * self.n + j]
    }

    /// Node resistance curvature `1 - (1/2) * sum of R over incident edges`.
    pub fn node_curvature(&self, i: usize) -> f64 {
        self.p[i]
    }

    pub fn node_curvatures(&self) -> &[f64] {
        &self.p
    }

    /// Smallest resistance over distinct vertex pairs of one component.
    pub fn min_resistance(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let x = self.resistance(i, j);
                if x.is_finite() {
                    best = Some(best.map_or(x, |b| b.min(x)));
                }
            }
        }
        best
    }
}

/// Computes all effective resistances by grounding the first vertex of each
/// component and inverting the reduced Laplacian.
///
/// With `G` the inverse of the grounded Laplacian (zero row and column for
/// the ground), `R_ij = G_ii + G_jj - 2 G_ij`.
pub fn resistance_data(g: &Graph) -> ResistanceData {
    let n = g.n();
    let comp = g.components();
    let count = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut members = vec![Vec::new(); count];
    for v in 0..n {
        members[comp[v]].push(v);
    }

    let mut r = vec![f64::INFINITY; n * n];
    for v in 0..n {
        r[v * n + v] = 0.0;
    }
    for verts in &members {
        if verts.len() < 2 {
            continue;
        }
        // Local index 0 is the ground; the reduced system uses 1..len.
        let size = verts.len() - 1;
        let local = |v: usize| verts.binary_search(&v).expect("vertex in component");
        let mut lap = DMatrix::<f64>::zeros(size, size);
        for (a, &v) in verts.iter().enumerate().skip(1) {
            lap[(a - 1, a - 1)] = g.degree(v) as f64;
            for &w in g.neighbors(v) {
                let b = local(w);
                if b > 0 {
                    lap[(a - 1, b - 1)] -= 1.0;
                }
            }
        }
        let inv = lap
            .cholesky()
            .expect("grounded Laplacian of a connected component is positive definite")
            .inverse();
        let green = |a: usize, b: usize| {
            if a == 0 || b == 0 {
                0.0
            } else {
                inv[(a - 1, b - 1)]
            }
        };
        for (a, &x) in verts.iter().enumerate() {
            for (b, &y) in verts.iter().enumerate() {
                if a != b {
                    let val = green(a, a) + green(b, b) - 2.0 * green(a, b);
                    r[x * n + y] = val.max(0.0);
                }
            }
        }
    }

    let p = (0..n)
        .map(|i| 1.0 - 0.5 * g.neighbors(i).iter().map(|&j| r[j * n + i]).sum::<f64>())
        .collect();
    ResistanceData { n, r, p }
}

/// Resistance curvature `2 (p_i + p_j) / R_ij` on every edge.
pub fn resistance_curvature(g: &Graph) -> EdgeFunction {
    resistance_curvature_with(g, &resistance_data(g))
}

pub fn resistance_curvature_with(g: &Graph, data: &ResistanceData) -> EdgeFunction {
    EdgeFunction::from_sorted(
        g.edges()
            .iter()
            .map(|&(i, j)| {
                let value = 2.0 * (data.p[i] + data.p[j]) / data.resistance(i, j);
                ((i, j), value)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_er, named_graph};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    // Moore–Penrose route: R_ij = (e_i - e_j)^T L^+ (e_i - e_j) on a
    // connected graph.
    fn pseudoinverse_oracle(g: &Graph) -> DMatrix<f64> {
        let n = g.n();
        let lap = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                g.degree(i) as f64
            } else if g.has_edge(i, j) {
                -1.0
            } else {
                0.0
            }
        });
        let pinv = lap.pseudo_inverse(1e-10).unwrap();
        DMatrix::from_fn(n, n, |i, j| pinv[(i, i)] + pinv[(j, j)] - 2.0 * pinv[(i, j)])
    }

    #[test]
    fn single_resistor() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let d = resistance_data(&g);
        assert_abs_diff_eq!(d.resistance(0, 1), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.node_curvature(0), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(resistance_curvature(&g).get(0, 1).unwrap(), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn triangle() {
        let g = named_graph("k3").unwrap();
        let d = resistance_data(&g);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert_abs_diff_eq!(d.resistance(i, j), 2.0 / 3.0, epsilon = 1e-12);
        }
        for i in 0..3 {
            assert_abs_diff_eq!(d.node_curvature(i), 1.0 / 3.0, epsilon = 1e-12);
        }
        for x in resistance_curvature(&g).values() {
            assert_abs_diff_eq!(x, 2.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn series_path() {
        let d = resistance_data(&named_graph("path3").unwrap());
        assert_abs_diff_eq!(d.resistance(0, 2), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn matches_pseudoinverse_on_small_graphs() {
        for seed in 0..40 {
            let n = 3 + (seed as usize % 8);
            let g = generate_er(n, 0.5, seed).unwrap();
            if !g.is_connected() {
                continue;
            }
            let oracle = pseudoinverse_oracle(&g);
            let d = resistance_data(&g);
            for i in 0..n {
                for j in 0..n {
                    assert_abs_diff_eq!(d.resistance(i, j), oracle[(i, j)], epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn components_are_independent() {
        let g = Graph::new(5, [(0, 1), (2, 3), (3, 4)]).unwrap();
        let d = resistance_data(&g);
        assert!(d.resistance(0, 2).is_infinite());
        assert_abs_diff_eq!(d.resistance(2, 4), 2.0, epsilon = 1e-12);
        // Foster: sum of edge resistances per tree component is |V| - 1, so
        // node curvatures of a connected component sum to one.
        assert_abs_diff_eq!(d.node_curvature(0) + d.node_curvature(1), 1.0, epsilon = 1e-12);
        let sum: f64 = (2..5).map(|i| d.node_curvature(i)).sum();
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rayleigh_monotonicity_under_edge_addition() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        let mut trials = 0;
        while trials < 50 {
            let n = rng.random_range(4..=15);
            let g = generate_er(n, 0.35, rng.random()).unwrap();
            let free: Vec<_> = (0..n)
                .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
                .filter(|&(u, v)| !g.has_edge(u, v))
                .collect();
            if free.is_empty() {
                continue;
            }
            let extra = free[rng.random_range(0..free.len())];
            let before = resistance_data(&g);
            let after = resistance_data(&g.with_edges([extra]).unwrap());
            for i in 0..n {
                for j in 0..n {
                    assert!(after.resistance(i, j) <= before.resistance(i, j) + 1e-12);
                }
            }
            trials += 1;
        }
    }
}
