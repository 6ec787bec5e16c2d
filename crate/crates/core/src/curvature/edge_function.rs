use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ordered, Edge, Graph};

/// A real value per vertex pair, sorted by `(u, v)` with `u < v`.
///
/// When used as a filtration function its domain must equal a graph's edge
/// set; see [`EdgeFunction::check_domain`].
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EdgeFunction {
    entries: Vec<(Edge, f64)>,
}

impl EdgeFunction {
    /// Builds from arbitrary entries; later duplicates overwrite earlier ones.
    pub fn new(entries: impl IntoIterator<Item = (Edge, f64)>) -> Result<Self> {
        let mut map = std::collections::BTreeMap::new();
        for ((u, v), value) in entries {
            if u == v {
                return Err(Error::Domain(format!("pair ({u}, {v}) is a self-pair")));
            }
            if !value.is_finite() {
                return Err(Error::Domain(format!(
                    "non-finite value {value} on ({u}, {v})"
                )));
            }
            map.insert(ordered(u, v), value);
        }
        Ok(EdgeFunction {
            entries: map.into_iter().collect(),
        })
    }

    /// Assigns `f(u, v)` to every edge of `g`.
    pub fn from_graph(g: &Graph, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        Self::new(g.edges().iter().map(|&(u, v)| ((u, v), f(u, v))))
    }

    pub(crate) fn from_sorted(entries: Vec<(Edge, f64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        EdgeFunction { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, u: usize, v: usize) -> Option<f64> {
        let key = ordered(u, v);
        self.entries
            .binary_search_by(|(e, _)| e.cmp(&key))
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn entries(&self) -> &[(Edge, f64)] {
        &self.entries
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|&(_, v)| v)
    }

    pub fn min(&self) -> Option<f64> {
        self.values().reduce(f64::min)
    }

    pub fn max(&self) -> Option<f64> {
        self.values().reduce(f64::max)
    }

    /// Values sorted ascending.
    pub fn sorted_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.values().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Result<Self> {
        Self::new(self.entries.iter().map(|&(e, v)| (e, f(v))))
    }

    /// Errors unless the domain is exactly the edge set of `g`.
    pub fn check_domain(&self, g: &Graph) -> Result<()> {
        let mut missing = Vec::new();
        let mut unexpected = Vec::new();
        let (mut i, mut j) = (0, 0);
        let edges = g.edges();
        while i < edges.len() || j < self.entries.len() {
            match (edges.get(i), self.entries.get(j).map(|x| &x.0)) {
                (Some(a), Some(b)) if a == b => {
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a < b => {
                    missing.push(*a);
                    i += 1;
                }
                (Some(a), None) => {
                    missing.push(*a);
                    i += 1;
                }
                (_, Some(b)) => {
                    unexpected.push(*b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        if missing.is_empty() && unexpected.is_empty() {
            Ok(())
        } else {
            Err(Error::DomainMismatch {
                missing,
                unexpected,
            })
        }
    }

    /// `u,v,value` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,v,value\n");
        for &((u, v), x) in &self.entries {
            let _ = writeln!(out, "{u},{v},{}", crate::report::fmt_float(x));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|&((u, v), x)| {
                    serde_json::json!({"u": u, "v": v, "value": crate::report::json_float(x)})
                })
                .collect(),
        )
    }
}
