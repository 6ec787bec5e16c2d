use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::curvature::{curvature, EdgeFunction};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphSet};
use crate::landscape::PipelineConfig;
use crate::persistence::{bottleneck_all, diagram_of, PersistenceDiagram};
use crate::report::{json_float, json_floats};

pub const DISTINGUISH_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistinguishMethod {
    /// 1-D Wasserstein distance between raw curvature value distributions.
    RawHist,
    /// Bottleneck distance between filtration diagrams.
    Bottleneck,
}

impl fmt::Display for DistinguishMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistinguishMethod::RawHist => "raw_hist",
            DistinguishMethod::Bottleneck => "bottleneck",
        })
    }
}

impl FromStr for DistinguishMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw_hist" | "raw" | "hist" => Ok(DistinguishMethod::RawHist),
            "bottleneck" | "filtration" => Ok(DistinguishMethod::Bottleneck),
            _ => Err(Error::Domain(format!("unknown distinguishing method `{s}`"))),
        }
    }
}

/// `∫_0^1 |F⁻¹(q) - G⁻¹(q)| dq` for the empirical distributions of two
/// value lists. Infinite if exactly one list is empty.
pub fn wasserstein_1d(xs: &[f64], ys: &[f64]) -> f64 {
    match (xs.is_empty(), ys.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(f64::total_cmp);
        v
    };
    let (a, b) = (sorted(xs), sorted(ys));
    let (n, m) = (a.len(), b.len());
    // Walk the merged quantile breakpoints i/n and j/m with integer
    // arithmetic on the common denominator n·m.
    let (mut i, mut j, mut q) = (0usize, 0usize, 0usize);
    let total = n * m;
    let mut acc = 0.0;
    while q < total {
        let next = ((i + 1) * m).min((j + 1) * n);
        acc += (next - q) as f64 * (a[i] - b[j]).abs();
        q = next;
        if q == (i + 1) * m {
            i += 1;
        }
        if q == (j + 1) * n {
            j += 1;
        }
    }
    acc / total as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistinguishReport {
    pub method: DistinguishMethod,
    /// `(i, j, distance)` for every pair `i < j`.
    pub pairs: Vec<(usize, usize, f64)>,
    pub distinguished: usize,
    pub success_rate: f64,
}

impl DistinguishReport {
    pub fn to_json(&self, labels: &[String]) -> Value {
        let name = |i: usize| labels.get(i).cloned().unwrap_or_else(|| i.to_string());
        json!({
            "method": self.method.to_string(),
            "tolerance": json_float(DISTINGUISH_TOLERANCE),
            "success_rate": json_float(self.success_rate),
            "distinguished": self.distinguished,
            "pairs": self.pairs.iter().map(|&(i, j, d)| json!({
                "a": name(i),
                "b": name(j),
                "distance": json_float(d),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn distances(&self) -> Value {
        json_floats(&self.pairs.iter().map(|p| p.2).collect::<Vec<_>>())
    }
}

enum Prepared {
    Values(Vec<f64>),
    Diagram(PersistenceDiagram),
}

/// Fraction of graph pairs whose distance exceeds `tol`.
pub fn pairwise_distinguish(
    gs: &GraphSet,
    method: DistinguishMethod,
    cfg: &PipelineConfig,
    tol: f64,
) -> Result<DistinguishReport> {
    if gs.len() < 2 {
        return Err(Error::Domain("need at least two graphs to compare".into()));
    }
    let prepared: Vec<Prepared> = gs
        .graphs
        .par_iter()
        .enumerate()
        .map(|(i, g): (usize, &Graph)| {
            let f: EdgeFunction = curvature(g, cfg.kind, &cfg.measure).map_err(Error::at_graph(i))?;
            Ok(match method {
                DistinguishMethod::RawHist => Prepared::Values(f.sorted_values()),
                DistinguishMethod::Bottleneck => {
                    Prepared::Diagram(diagram_of(g, &f).map_err(Error::at_graph(i))?)
                }
            })
        })
        .collect::<Result<_>>()?;
    let n = gs.len();
    let index: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let pairs: Vec<(usize, usize, f64)> = index
        .par_iter()
        .map(|&(i, j)| {
            let d = match (&prepared[i], &prepared[j]) {
                (Prepared::Values(a), Prepared::Values(b)) => wasserstein_1d(a, b),
                (Prepared::Diagram(a), Prepared::Diagram(b)) => bottleneck_all(a, b).value(),
                _ => unreachable!("one method per run"),
            };
            (i, j, d)
        })
        .collect();
    let distinguished = pairs.iter().filter(|p| p.2 > tol).count();
    Ok(DistinguishReport {
        method,
        distinguished,
        success_rate: distinguished as f64 / pairs.len() as f64,
        pairs,
    })
}
