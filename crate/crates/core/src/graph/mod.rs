//! Undirected simple graphs, file formats, generators and perturbations.

mod generators;
mod io;
mod named;
mod paths;
mod perturb;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use generators::stream_rng;
pub use generators::{
    generate_community, generate_community_with, generate_er, member_seed, sample_graphon,
    sample_graphon_set, sample_graphon_with_latents, sample_set, Graphon,
};
pub use io::{load_edge_list, load_graph_set, read_graph_file, to_edge_list, write_jsonl};
pub use named::{named_graph, NAMED_GRAPHS};
pub use paths::{shortest_path_matrix, DistanceMatrix};
pub use perturb::{perturb, PerturbMode, PerturbationSpec};

/// An undirected edge stored with `u < v`.
pub type Edge = (usize, usize);

pub(crate) fn ordered(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Undirected simple graph on vertices `0..n`.
///
/// Edges are kept sorted lexicographically; adjacency lists are sorted too.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRecord", into = "GraphRecord")]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRecord {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphRecord> for Graph {
    type Error = Error;

    fn try_from(r: GraphRecord) -> Result<Self> {
        Graph::new(r.n, r.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

impl From<Graph> for GraphRecord {
    fn from(g: Graph) -> Self {
        GraphRecord {
            n: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

impl Graph {
    /// Builds a graph, collapsing duplicate and reversed edges.
    ///
    /// Self-loops and out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidEdge { u, v, n });
            }
            set.insert(ordered(u, v));
        }
        Ok(Self::from_sorted(n, set.into_iter().collect()))
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    // `edges` must already be sorted, deduplicated and valid.
    pub(crate) fn from_sorted(n: usize, edges: Vec<Edge>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            debug_assert!(u < v && v < n);
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Number of common neighbours of `u` and `v`.
    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        let (a, b) = (&self.adj[u], &self.adj[v]);
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    /// Component label per vertex, labels numbered in order of smallest vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for &y in &self.adj[x] {
                    if label[y] == usize::MAX {
                        label[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Returns a copy with the given edges added (duplicates ignored).
    pub fn with_edges(&self, extra: impl IntoIterator<Item = Edge>) -> Result<Self> {
        Graph::new(self.n, self.edges.iter().copied().chain(extra))
    }

    /// Returns a copy with the given edges removed.
    pub fn without_edges(&self, removed: &[Edge]) -> Self {
        let drop: BTreeSet<Edge> = removed.iter().map(|&(u, v)| ordered(u, v)).collect();
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| !drop.contains(e))
            .collect();
        Self::from_sorted(self.n, edges)
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch(perm.len(), self.n));
        }
        Graph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }
}

/// An ordered collection of graphs with optional per-graph tags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GraphSet {
    pub graphs: Vec<Graph>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

impl GraphSet {
    pub fn new(graphs: Vec<Graph>) -> Self {
        GraphSet {
            graphs,
            labels: Vec::new(),
        }
    }

    pub fn with_labels(graphs: Vec<Graph>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != graphs.len() {
            return Err(Error::LengthMismatch(labels.len(), graphs.len()));
        }
        Ok(GraphSet { graphs, labels })
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn ensure_non_empty(&self) -> Result<()> {
        if self.graphs.is_empty() {
            Err(Error::Empty("graph set"))
        } else {
            Ok(())
        }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Graph> {
        self.graphs.iter()
    }
}

impl FromIterator<Graph> for GraphSet {
    fn from_iter<I: IntoIterator<Item = Graph>>(iter: I) -> Self {
        GraphSet::new(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_collapses_reversed_edges() {
        let g = Graph::new(3, [(1, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.degree(1), 2);
    }

    #[test]
    fn new_rejects_self_loop_and_range() {
        assert!(Graph::new(2, [(1, 1)]).is_err());
        assert!(Graph::new(2, [(0, 2)]).is_err());
    }

    #[test]
    fn components_of_two_pieces() {
        let g = Graph::new(5, [(0, 1), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![0, 0, 1, 2, 2]);
        assert_eq!(g.component_count(), 3);
    }

    #[test]
    fn common_neighbours_in_k4() {
        let g = named_graph("k4").unwrap();
        assert_eq!(g.common_neighbors(0, 1), 2);
    }

    #[test]
    fn json_record_round_trip() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"n":4,"edges":[[0,1],[2,3]]}"#);
        let back: Graph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[[1,1]]}"#).is_err());
    }
}
