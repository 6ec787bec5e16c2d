use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::generators::rng;
use super::{Edge, Graph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PerturbMode {
    Add,
    Delete,
}

impl fmt::Display for PerturbMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PerturbMode::Add => "add",
            PerturbMode::Delete => "delete",
        })
    }
}

impl FromStr for PerturbMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "add" => Ok(PerturbMode::Add),
            "delete" | "del" => Ok(PerturbMode::Delete),
            _ => Err(Error::Domain(format!("unknown perturbation mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub mode: PerturbMode,
    pub fraction: f64,
    pub seed: u64,
    pub preserve_connectivity: bool,
}

impl PerturbationSpec {
    pub fn new(mode: PerturbMode, fraction: f64, seed: u64) -> Self {
        PerturbationSpec {
            mode,
            fraction,
            seed,
            preserve_connectivity: false,
        }
    }

    pub fn preserving_connectivity(mut self) -> Self {
        self.preserve_connectivity = true;
        self
    }

    /// Number of edges the perturbation adds or removes on `g`.
    pub fn count_for(&self, g: &Graph) -> usize {
        (self.fraction * g.edge_count() as f64).round() as usize
    }
}

const RETRY_FACTOR: usize = 100;

/// Adds or deletes `round(fraction * |E|)` uniformly chosen edges.
///
/// With `preserve_connectivity`, deletions that would split a component are
/// redrawn (at most `100 *` the requested count attempts). Additions never
/// merge components in that mode: candidates are restricted to pairs inside
/// one component.
pub fn perturb(g: &Graph, spec: &PerturbationSpec) -> Result<Graph> {
    if !(0.0..1.0).contains(&spec.fraction) {
        return Err(Error::Domain(format!(
            "perturbation fraction {} outside [0, 1)",
            spec.fraction
        )));
    }
    let requested = spec.count_for(g);
    if requested == 0 {
        return Ok(g.clone());
    }
    let mut r = rng(spec.seed);
    match spec.mode {
        PerturbMode::Add => add_edges(g, requested, spec.preserve_connectivity, &mut r),
        PerturbMode::Delete if spec.preserve_connectivity => {
            delete_non_bridges(g, requested, &mut r)
        }
        PerturbMode::Delete => {
            let mut edges = g.edges().to_vec();
            edges.shuffle(&mut r);
            Ok(g.without_edges(&edges[..requested]))
        }
    }
}

fn add_edges(g: &Graph, requested: usize, same_component: bool, r: &mut impl Rng) -> Result<Graph> {
    let comp = g.components();
    let mut candidates: Vec<Edge> = (0..g.n())
        .flat_map(|u| ((u + 1)..g.n()).map(move |v| (u, v)))
        .filter(|&(u, v)| !g.has_edge(u, v) && (!same_component || comp[u] == comp[v]))
        .collect();
    if candidates.len() < requested {
        return Err(Error::Exhausted {
            mode: PerturbMode::Add,
            done: 0,
            requested,
        });
    }
    let (chosen, _) = candidates.partial_shuffle(r, requested);
    g.with_edges(chosen.iter().copied())
}

// An edge is a bridge iff its endpoints are disconnected once it is removed.
fn is_bridge(adj: &[BTreeSet<usize>], (u, v): Edge) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![u];
    seen[u] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if (x == u && y == v) || (x == v && y == u) || seen[y] {
                continue;
            }
            if y == v {
                return false;
            }
            seen[y] = true;
            stack.push(y);
        }
    }
    true
}

fn delete_non_bridges(g: &Graph, requested: usize, r: &mut impl Rng) -> Result<Graph> {
    let mut adj: Vec<BTreeSet<usize>> = (0..g.n())
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut alive: Vec<Edge> = g.edges().to_vec();
    // Deleting edges never turns a bridge back into a cycle edge.
    let mut bridges: BTreeSet<Edge> = BTreeSet::new();
    let mut removed = Vec::with_capacity(requested);
    let mut attempts = 0;
    let cap = RETRY_FACTOR * requested;

    while removed.len() < requested {
        let open: Vec<usize> = (0..alive.len())
            .filter(|&i| !bridges.contains(&alive[i]))
            .collect();
        if open.is_empty() || attempts >= cap {
            return Err(Error::Exhausted {
                mode: PerturbMode::Delete,
                done: removed.len(),
                requested,
            });
        }
        attempts += 1;
        let idx = open[r.random_range(0..open.len())];
        let e = alive[idx];
        if is_bridge(&adj, e) {
            bridges.insert(e);
            continue;
        }
        adj[e.0].remove(&e.1);
        adj[e.1].remove(&e.0);
        alive.swap_remove(idx);
        removed.push(e);
    }
    Ok(g.without_edges(&removed))
}
