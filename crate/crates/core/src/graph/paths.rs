use std::collections::VecDeque;

use super::Graph;

/// Dense symmetric matrix of hop distances; unreachable pairs are `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

/// All-pairs hop distances by one breadth-first search per vertex.
pub fn shortest_path_matrix(g: &Graph) -> DistanceMatrix {
    let n = g.n();
    let mut data = vec![f64::INFINITY; n * n];
    let mut queue = VecDeque::new();
    let mut hops = vec![usize::MAX; n];
    for s in 0..n {
        hops.fill(usize::MAX);
        hops[s] = 0;
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            data[s * n + x] = hops[x] as f64;
            for &y in g.neighbors(x) {
                if hops[y] == usize::MAX {
                    hops[y] = hops[x] + 1;
                    queue.push_back(y);
                }
            }
        }
    }
    DistanceMatrix { n, data }
}
