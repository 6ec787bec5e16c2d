use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Probability measure on the vertices of a graph, sorted by vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeMeasure {
    support: Vec<(usize, f64)>,
}

const MASS_TOLERANCE: f64 = 1e-12;

impl NodeMeasure {
    /// Builds a measure; zero masses are dropped and repeated vertices summed.
    pub fn new(masses: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut support: Vec<(usize, f64)> = Vec::new();
        let mut raw: Vec<(usize, f64)> = masses.into_iter().collect();
        raw.sort_by_key(|&(v, _)| v);
        for (v, m) in raw {
            if !m.is_finite() || m < 0.0 {
                return Err(Error::Domain(format!("invalid mass {m} on vertex {v}")));
            }
            match support.last_mut() {
                Some((last, acc)) if *last == v => *acc += m,
                _ => support.push((v, m)),
            }
        }
        support.retain(|&(_, m)| m > 0.0);
        let total: f64 = support.iter().map(|&(_, m)| m).sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::Domain(format!("masses sum to {total}, not 1")));
        }
        Ok(NodeMeasure { support })
    }

    pub fn dirac(v: usize) -> Self {
        NodeMeasure {
            support: vec![(v, 1.0)],
        }
    }

    pub fn support(&self) -> &[(usize, f64)] {
        &self.support
    }

    pub fn mass(&self, v: usize) -> f64 {
        self.support
            .binary_search_by_key(&v, |&(x, _)| x)
            .map_or(0.0, |i| self.support[i].1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    /// Uniform mass on the one-hop neighbourhood.
    Uniform,
    /// Averaged k-step simple random walk distributions, k = 1..=steps.
    RandomWalk,
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureKind::Uniform => "uniform",
            MeasureKind::RandomWalk => "rw",
        })
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" | "uniform_1hop" => Ok(MeasureKind::Uniform),
            "rw" | "random_walk" => Ok(MeasureKind::RandomWalk),
            _ => Err(Error::Domain(format!("unknown measure `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureConfig {
    pub kind: MeasureKind,
    /// Random-walk horizon m.
    pub steps: usize,
    /// Mass kept on the vertex itself.
    pub self_mass: f64,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig {
            kind: MeasureKind::Uniform,
            steps: 2,
            self_mass: 0.0,
        }
    }
}

impl MeasureConfig {
    pub fn uniform() -> Self {
        Self::default()
    }

    pub fn random_walk(steps: usize) -> Self {
        MeasureConfig {
            kind: MeasureKind::RandomWalk,
            steps,
            self_mass: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::Domain("random-walk steps must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.self_mass) {
            return Err(Error::Domain(format!(
                "self mass {} outside [0, 1)",
                self.self_mass
            )));
        }
        Ok(())
    }
}

/// The measure attached to vertex `v`.
///
/// Uniform puts `(1 - a) / deg(v)` on each neighbour and `a` on `v`. The
/// random-walk measure sums the k-step walk distributions for `k = 1..=m`,
/// normalises the sum, and mixes in `a` on `v` the same way.
pub fn node_measure(g: &Graph, v: usize, cfg: &MeasureConfig) -> Result<NodeMeasure> {
    cfg.validate()?;
    if v >= g.n() {
        return Err(Error::Domain(format!("vertex {v} out of range")));
    }
    let deg = g.degree(v);
    if deg == 0 {
        return Err(Error::DegenerateMeasure(v));
    }
    let keep = 1.0 - cfg.self_mass;
    let mut masses: Vec<(usize, f64)> = match cfg.kind {
        MeasureKind::Uniform => g
            .neighbors(v)
            .iter()
            .map(|&y| (y, keep / deg as f64))
            .collect(),
        MeasureKind::RandomWalk => {
            let walk = random_walk_sum(g, v, cfg.steps);
            let total: f64 = walk.iter().map(|&(_, m)| m).sum();
            walk.into_iter().map(|(y, m)| (y, keep * m / total)).collect()
        }
    };
    if cfg.self_mass > 0.0 {
        masses.push((v, cfg.self_mass));
    }
    NodeMeasure::new(masses)
}

// Sum over k = 1..=steps of the k-step walk distribution started at `v`.
fn random_walk_sum(g: &Graph, v: usize, steps: usize) -> Vec<(usize, f64)> {
    let n = g.n();
    let mut current = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut acc = vec![0.0; n];
    let mut frontier = vec![v];
    let mut in_next = vec![false; n];
    current[v] = 1.0;
    for _ in 0..steps {
        let mut reached = Vec::new();
        for &x in &frontier {
            let share = current[x] / g.degree(x) as f64;
            for &y in g.neighbors(x) {
                next[y] += share;
                if !in_next[y] {
                    in_next[y] = true;
                    reached.push(y);
                }
            }
        }
        for &x in &frontier {
            current[x] = 0.0;
        }
        for &y in &reached {
            current[y] = next[y];
            acc[y] += next[y];
            next[y] = 0.0;
            in_next[y] = false;
        }
        frontier = reached;
    }
    acc.into_iter()
        .enumerate()
        .filter(|&(_, m)| m > 0.0)
        .collect()
}
