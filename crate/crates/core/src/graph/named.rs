use super::Graph;
use crate::error::{Error, Result};

pub const NAMED_GRAPHS: [&str; 8] = [
    "k3",
    "k4",
    "c4",
    "c6",
    "path3",
    "star4",
    "rook4x4",
    "shrikhande",
];

fn complete(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect()
}

fn cycle(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}

// Vertex (r, c) of a 4x4 torus has id 4r + c.
fn torus_id(r: i64, c: i64) -> usize {
    (r.rem_euclid(4) * 4 + c.rem_euclid(4)) as usize
}

/// K4 □ K4: vertices adjacent iff they share a row or a column.
fn rook4x4() -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for a in 0..16usize {
        for b in (a + 1)..16 {
            if a / 4 == b / 4 || a % 4 == b % 4 {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Cayley graph of Z4 x Z4 with connection set {±(1,0), ±(0,1), ±(1,1)}.
fn shrikhande() -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for r in 0..4 {
        for c in 0..4 {
            for (dr, dc) in [(1, 0), (0, 1), (1, 1)] {
                edges.push((torus_id(r, c), torus_id(r + dr, c + dc)));
            }
        }
    }
    edges
}

/// Looks up one of the built-in graphs listed in [`NAMED_GRAPHS`].
pub fn named_graph(name: &str) -> Result<Graph> {
    let (n, edges) = match name {
        "k3" => (3, complete(3)),
        "k4" => (4, complete(4)),
        "c4" => (4, cycle(4)),
        "c6" => (6, cycle(6)),
        "path3" => (3, vec![(0, 1), (1, 2)]),
        "star4" => (4, vec![(0, 1), (0, 2), (0, 3)]),
        "rook4x4" => (16, rook4x4()),
        "shrikhande" => (16, shrikhande()),
        other => return Err(Error::UnknownGraph(other.to_string())),
    };
    Graph::new(n, edges)
}
