//! Exact Wasserstein-1 distance between small discrete measures.
//!
//! The transportation problem is solved as a min-cost flow on the complete
//! bipartite graph between the two supports using successive shortest paths
//! (Dijkstra with node potentials, dense O(V^2) per search). Supports in this
//! crate are neighbourhoods of a vertex, so V stays in the tens to low
//! hundreds.

use super::measure::NodeMeasure;
use crate::error::{Error, Result};
use crate::graph::DistanceMatrix;

// Residual capacities at or below this are treated as exhausted.
const FLOW_EPS: f64 = 1e-14;

/// Minimum transport cost moving `supply` onto `demand` with `cost[i][j]`
/// per unit from supply point `i` to demand point `j`.
///
/// Both mass vectors must be non-negative with equal totals (up to rounding).
pub fn min_cost_transport(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> f64 {
    let m = supply.len();
    let k = demand.len();
    if m == 0 || k == 0 {
        return 0.0;
    }
    debug_assert!(cost.len() == m && cost.iter().all(|row| row.len() == k));

    // Node layout: 0 = source, 1..=m suppliers, m+1..=m+k consumers, m+k+1 = sink.
    let sink = m + k + 1;
    let nodes = sink + 1;
    let mut supply_left = supply.to_vec();
    let mut demand_left = demand.to_vec();
    let mut flow = vec![vec![0.0f64; k]; m];
    let mut potential = vec![0.0f64; nodes];
    let mut dist = vec![f64::INFINITY; nodes];
    let mut parent = vec![usize::MAX; nodes];
    let mut done = vec![false; nodes];

    let remaining = |s: &[f64]| s.iter().filter(|&&x| x > FLOW_EPS).sum::<f64>();

    while remaining(&supply_left) > FLOW_EPS && remaining(&demand_left) > FLOW_EPS {
        dist.fill(f64::INFINITY);
        parent.fill(usize::MAX);
        done.fill(false);
        dist[0] = 0.0;

        loop {
            let mut u = usize::MAX;
            let mut best = f64::INFINITY;
            for v in 0..nodes {
                if !done[v] && dist[v] < best {
                    best = dist[v];
                    u = v;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            let relax = |v: usize, w: f64, dist: &mut [f64], parent: &mut [usize]| {
                let reduced = w + potential[u] - potential[v];
                let cand = dist[u] + reduced.max(0.0);
                if cand < dist[v] {
                    dist[v] = cand;
                    parent[v] = u;
                }
            };
            if u == 0 {
                for i in 0..m {
                    if supply_left[i] > FLOW_EPS {
                        relax(1 + i, 0.0, &mut dist, &mut parent);
                    }
                }
            } else if u <= m {
                let i = u - 1;
                for j in 0..k {
                    relax(1 + m + j, cost[i][j], &mut dist, &mut parent);
                }
            } else if u < sink {
                let j = u - 1 - m;
                for i in 0..m {
                    if flow[i][j] > FLOW_EPS {
                        relax(1 + i, -cost[i][j], &mut dist, &mut parent);
                    }
                }
                if demand_left[j] > FLOW_EPS {
                    relax(sink, 0.0, &mut dist, &mut parent);
                }
            }
        }

        if !dist[sink].is_finite() {
            break;
        }
        for v in 0..nodes {
            if dist[v].is_finite() {
                potential[v] += dist[v];
            }
        }

        // Walk back from the sink to find the bottleneck, then augment.
        let mut amount = f64::INFINITY;
        let mut v = sink;
        while v != 0 {
            let u = parent[v];
            let cap = if u == 0 {
                supply_left[v - 1]
            } else if v == sink {
                demand_left[u - 1 - m]
            } else if u <= m {
                f64::INFINITY
            } else {
                flow[v - 1][u - 1 - m]
            };
            amount = amount.min(cap);
            v = u;
        }
        let mut v = sink;
        while v != 0 {
            let u = parent[v];
            if u == 0 {
                supply_left[v - 1] -= amount;
            } else if v == sink {
                demand_left[u - 1 - m] -= amount;
            } else if u <= m {
                flow[u - 1][v - 1 - m] += amount;
            } else {
                flow[v - 1][u - 1 - m] -= amount;
            }
            v = u;
        }
    }

    let mut total = 0.0;
    for i in 0..m {
        for j in 0..k {
            if flow[i][j] > 0.0 {
                total += flow[i][j] * cost[i][j];
            }
        }
    }
    total
}

/// Exact W1 distance between two measures under the metric `d`.
pub fn wasserstein1(mu: &NodeMeasure, nu: &NodeMeasure, d: &DistanceMatrix) -> Result<f64> {
    let a = mu.support();
    let b = nu.support();
    let mut cost = Vec::with_capacity(a.len());
    for &(x, _) in a {
        let row: Vec<f64> = b.iter().map(|&(y, _)| d.get(x, y)).collect();
        if let Some(pos) = row.iter().position(|c| !c.is_finite()) {
            return Err(Error::Disconnected(x, b[pos].0));
        }
        cost.push(row);
    }
    let supply: Vec<f64> = a.iter().map(|&(_, m)| m).collect();
    let demand: Vec<f64> = b.iter().map(|&(_, m)| m).collect();
    Ok(min_cost_transport(&supply, &demand, &cost))
}

/// W1 from the Dirac at `v` to `mu`: every unit of mass travels straight
/// from `v`.
pub fn jump(v: usize, mu: &NodeMeasure, d: &DistanceMatrix) -> Result<f64> {
    let mut total = 0.0;
    for &(y, m) in mu.support() {
        let c = d.get(v, y);
        if !c.is_finite() {
            return Err(Error::Disconnected(v, y));
        }
        total += m * c;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::measure::{node_measure, MeasureConfig};
    use crate::graph::{generate_er, named_graph, shortest_path_matrix, Graph};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    // Enumerates every basis of the transportation problem: a set of
    // m + k - 1 cells forming a spanning tree of the bipartite row/column
    // graph. Each basis determines a unique plan by peeling leaves; the
    // cheapest non-negative one is the optimum.
    fn basis_enumeration_oracle(a: &[f64], b: &[f64], cost: &[Vec<f64>]) -> f64 {
        let (m, k) = (a.len(), b.len());
        let cells: Vec<(usize, usize)> =
            (0..m).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
        let size = m + k - 1;
        let mut best = f64::INFINITY;
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            if let Some(c) = solve_basis(a, b, cost, &pick.iter().map(|&x| cells[x]).collect::<Vec<_>>()) {
                best = best.min(c);
            }
            let n = cells.len();
            let mut i = size;
            while i > 0 && pick[i - 1] == i - 1 + n - size {
                i -= 1;
            }
            if i == 0 {
                return best;
            }
            pick[i - 1] += 1;
            for j in i..size {
                pick[j] = pick[j - 1] + 1;
            }
        }
    }

    fn solve_basis(a: &[f64], b: &[f64], cost: &[Vec<f64>], basis: &[(usize, usize)]) -> Option<f64> {
        let m = a.len();
        let mut mass: Vec<f64> = a.iter().chain(b).copied().collect();
        let mut alive: Vec<bool> = vec![true; basis.len()];
        let mut total = 0.0;
        for _ in 0..basis.len() {
            let deg = |node: usize, alive: &[bool]| {
                basis.iter().zip(alive).filter(|(&(i, j), &on)| on && (i == node || m + j == node)).count()
            };
            let leaf = (0..mass.len()).find(|&node| deg(node, &alive) == 1)?;
            let e = (0..basis.len())
                .find(|&e| alive[e] && (basis[e].0 == leaf || m + basis[e].1 == leaf))?;
            let (i, j) = basis[e];
            let x = mass[leaf];
            if x < -1e-12 {
                return None;
            }
            total += x * cost[i][j];
            mass[i] -= x;
            mass[m + j] -= x;
            alive[e] = false;
        }
        mass.iter().all(|r| r.abs() < 1e-9).then_some(total)
    }

    fn edge_measures(g: &Graph, u: usize, v: usize) -> (NodeMeasure, NodeMeasure) {
        let cfg = MeasureConfig::uniform();
        (
            node_measure(g, u, &cfg).unwrap(),
            node_measure(g, v, &cfg).unwrap(),
        )
    }

    #[test]
    fn identical_measures_cost_nothing() {
        let g = named_graph("c6").unwrap();
        let d = shortest_path_matrix(&g);
        let (mu, _) = edge_measures(&g, 0, 1);
        assert_eq!(wasserstein1(&mu, &mu, &d).unwrap(), 0.0);
    }

    #[test]
    fn diracs_cost_their_distance() {
        let g = named_graph("c6").unwrap();
        let d = shortest_path_matrix(&g);
        let w = wasserstein1(&NodeMeasure::dirac(0), &NodeMeasure::dirac(3), &d).unwrap();
        assert_eq!(w, 3.0);
    }

    #[test]
    fn triangle_edge_measures() {
        let g = named_graph("k3").unwrap();
        let d = shortest_path_matrix(&g);
        let (mu, nu) = edge_measures(&g, 0, 1);
        let w = wasserstein1(&mu, &nu, &d).unwrap();
        assert_abs_diff_eq!(w, 0.5, epsilon = 1e-12);
        let cost = vec![vec![1.0, 1.0], vec![0.0, 1.0]];
        assert_abs_diff_eq!(
            basis_enumeration_oracle(&[0.5, 0.5], &[0.5, 0.5], &cost),
            0.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn unbalanced_supports_regression() {
        // Reference optimum from an independent LP solve.
        let a: Vec<f64> = [8.0, 4.0, 3.0, 2.0].iter().map(|x| x / 17.0).collect();
        let b: Vec<f64> = [7.0, 1.0, 1.0, 2.0].iter().map(|x| x / 11.0).collect();
        let c = [0., 2., 0., 0., 4., 4., 2., 0., 0., 1., 0., 0., 4., 4., 0., 1.];
        let cost: Vec<Vec<f64>> = (0..4).map(|i| c[i * 4..i * 4 + 4].to_vec()).collect();
        assert_abs_diff_eq!(min_cost_transport(&a, &b, &cost), 0.3315508021390374, epsilon = 1e-12);
        assert_abs_diff_eq!(basis_enumeration_oracle(&a, &b, &cost), 0.3315508021390374, epsilon = 1e-12);
    }

    #[test]
    fn disconnected_support_is_an_error() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let d = shortest_path_matrix(&g);
        assert!(matches!(
            wasserstein1(&NodeMeasure::dirac(0), &NodeMeasure::dirac(2), &d),
            Err(Error::Disconnected(0, 2))
        ));
    }

    #[test]
    fn jump_matches_solver() {
        let g = generate_er(15, 0.3, 4).unwrap();
        let d = shortest_path_matrix(&g);
        for v in (0..15).filter(|&v| g.degree(v) > 0) {
            let mu = node_measure(&g, v, &MeasureConfig::random_walk(2)).unwrap();
            let direct = jump(v, &mu, &d).unwrap();
            let solved = wasserstein1(&NodeMeasure::dirac(v), &mu, &d).unwrap();
            assert_abs_diff_eq!(direct, solved, epsilon = 1e-12);
        }
    }

    proptest! {
        #[test]
        fn solver_matches_corner_enumeration(
            a in prop::collection::vec(1u32..10, 1..5),
            b in prop::collection::vec(1u32..10, 1..5),
            c in prop::collection::vec(0u32..6, 16),
        ) {
            let sa: f64 = a.iter().map(|&x| x as f64).sum();
            let sb: f64 = b.iter().map(|&x| x as f64).sum();
            let a: Vec<f64> = a.iter().map(|&x| x as f64 / sa).collect();
            let b: Vec<f64> = b.iter().map(|&x| x as f64 / sb).collect();
            let cost: Vec<Vec<f64>> = (0..a.len())
                .map(|i| (0..b.len()).map(|j| c[i * 4 + j] as f64).collect())
                .collect();
            let got = min_cost_transport(&a, &b, &cost);
            let want = basis_enumeration_oracle(&a, &b, &cost);
            prop_assert!((got - want).abs() < 1e-9, "solver {got} oracle {want}");
        }

        #[test]
        fn w1_is_a_metric(seed in 0u64..500) {
            let g = generate_er(14, 0.35, seed).unwrap();
            let d = shortest_path_matrix(&g);
            let comp = g.components();
            let hub = (0..14).max_by_key(|&v| g.degree(v)).unwrap();
            let verts: Vec<usize> = (0..14)
                .filter(|&v| g.degree(v) > 0 && comp[v] == comp[hub])
                .collect();
            prop_assume!(verts.len() >= 3);
            let cfgs = [MeasureConfig::uniform(), MeasureConfig::random_walk(2)];
            let ms: Vec<NodeMeasure> = verts.iter().take(3).enumerate()
                .map(|(i, &v)| node_measure(&g, v, &cfgs[i % 2]).unwrap())
                .collect();
            let w = |x: &NodeMeasure, y: &NodeMeasure| wasserstein1(x, y, &d).unwrap();
            prop_assert!((w(&ms[0], &ms[1]) - w(&ms[1], &ms[0])).abs() < 1e-9);
            prop_assert!(w(&ms[0], &ms[2]) <= w(&ms[0], &ms[1]) + w(&ms[1], &ms[2]) + 1e-9);
        }
    }
}
