use serde_json::{json, Value};

use super::filtration::Filtration;
use crate::curvature::EdgeFunction;
use crate::graph::Graph;
use crate::report::json_float;

/// A (birth, death) pair; `death` may be `+inf`.
pub type Pair = (f64, f64);

/// Dimension-0 and dimension-1 persistence pairs of an edge filtration.
///
/// Pairs are stored sorted by birth, then death.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PersistenceDiagram {
    pub dim0: Vec<Pair>,
    pub dim1: Vec<Pair>,
}

impl PersistenceDiagram {
    pub fn new(mut dim0: Vec<Pair>, mut dim1: Vec<Pair>) -> Self {
        sort_pairs(&mut dim0);
        sort_pairs(&mut dim1);
        PersistenceDiagram { dim0, dim1 }
    }

    pub fn dim(&self, k: usize) -> &[Pair] {
        match k {
            0 => &self.dim0,
            1 => &self.dim1,
            _ => &[],
        }
    }

    /// Classes alive at `t`: `birth <= t < death`.
    pub fn alive_at(&self, t: f64) -> (usize, usize) {
        let count = |ps: &[Pair]| ps.iter().filter(|&&(b, d)| b <= t && t < d).count();
        (count(&self.dim0), count(&self.dim1))
    }

    /// Largest finite coordinate, if any.
    pub fn max_finite(&self) -> Option<f64> {
        self.dim0
            .iter()
            .chain(&self.dim1)
            .flat_map(|&(b, d)| [b, d])
            .filter(|x| x.is_finite())
            .reduce(f64::max)
    }

    pub fn min_finite(&self) -> Option<f64> {
        self.dim0
            .iter()
            .chain(&self.dim1)
            .flat_map(|&(b, d)| [b, d])
            .filter(|x| x.is_finite())
            .reduce(f64::min)
    }

    /// `{"dim0":[[b,d|"inf"],…],"dim1":[[b,"inf"],…]}`
    pub fn to_json(&self) -> Value {
        let pairs = |ps: &[Pair]| {
            Value::Array(
                ps.iter()
                    .map(|&(b, d)| json!([json_float(b), json_float(d)]))
                    .collect(),
            )
        };
        json!({"dim0": pairs(&self.dim0), "dim1": pairs(&self.dim1)})
    }
}

fn sort_pairs(ps: &mut [Pair]) {
    ps.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
}

struct UnionFind {
    parent: Vec<usize>,
    birth: Vec<f64>,
}

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
}

/// Sweeps the filtration with a union-find.
///
/// Merging two components kills the younger one (larger birth, ties: the
/// larger root id) at the edge value. An edge inside one component opens a
/// cycle that never dies. Survivors get an infinite death.
pub fn persistence_diagram(filt: &Filtration) -> PersistenceDiagram {
    let n = filt.n();
    let mut uf = UnionFind {
        parent: (0..n).collect(),
        birth: (0..n)
            .map(|v| filt.vertex_entry(v).unwrap_or(f64::INFINITY))
            .collect(),
    };
    let mut dim0 = Vec::new();
    let mut dim1 = Vec::new();

    for &((u, v), value) in filt.steps() {
        let (ru, rv) = (uf.find(u), uf.find(v));
        if ru == rv {
            dim1.push((value, f64::INFINITY));
            continue;
        }
        let younger_is_u = match uf.birth[ru].total_cmp(&uf.birth[rv]) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => ru > rv,
        };
        let (dead, alive) = if younger_is_u { (ru, rv) } else { (rv, ru) };
        dim0.push((uf.birth[dead], value));
        uf.parent[dead] = alive;
    }

    for v in 0..n {
        if filt.vertex_entry(v).is_some() && uf.find(v) == v {
            dim0.push((uf.birth[v], f64::INFINITY));
        }
    }
    PersistenceDiagram::new(dim0, dim1)
}

/// Betti numbers of the sublevel subgraph `{e : f(e) <= t}` counted
/// directly: components of the subgraph spanned by the surviving edges,
/// and `|E_t| - |V_t| + b0` cycles.
pub fn betti_oracle(g: &Graph, f: &EdgeFunction, t: f64) -> (usize, usize) {
    let kept: Vec<(usize, usize)> = f
        .entries()
        .iter()
        .filter(|&&(_, x)| x <= t)
        .map(|&(e, _)| e)
        .collect();
    let sub = Graph::new(g.n(), kept.iter().copied()).expect("edges come from a valid graph");
    let present: Vec<usize> = (0..g.n()).filter(|&v| sub.degree(v) > 0).collect();
    let labels = sub.components();
    let mut comps: Vec<usize> = present.iter().map(|&v| labels[v]).collect();
    comps.sort_unstable();
    comps.dedup();
    let b0 = comps.len();
    let b1 = kept.len() + b0 - present.len();
    (b0, b1)
}
