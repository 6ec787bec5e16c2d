use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::pearson;
use crate::curvature::EdgeFunction;
use crate::error::{Error, Result};
use crate::graph::{perturb, stream_rng, Graph, GraphSet, PerturbMode, PerturbationSpec};
use crate::landscape::{distance_between_groups, prepare_landscapes, PipelineConfig};
use crate::report::{fmt_float, json_float, json_floats};

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationReport {
    pub mode: PerturbMode,
    pub fractions: Vec<f64>,
    pub distances: Vec<f64>,
    /// Correlation of distance with fraction; `None` when undefined.
    pub pearson: Option<f64>,
    /// Per fraction, the largest `|κ - κ'| / σ_κ` over graphs and surviving
    /// edges, with `σ_κ` the standard deviation of the unperturbed values.
    pub max_relative_change: Vec<f64>,
}

impl PerturbationReport {
    /// The correlation, or the reason it is undefined.
    pub fn correlation(&self) -> Result<f64> {
        self.pearson.ok_or(Error::UndefinedCorrelation)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mode": self.mode.to_string(),
            "fractions": json_floats(&self.fractions),
            "distances": json_floats(&self.distances),
            "pearson": self.pearson.map_or(Value::Null, json_float),
            "max_relative_change": json_floats(&self.max_relative_change),
        })
    }

    /// `fraction,distance,max_relative_change` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("fraction,distance,max_relative_change\n");
        for i in 0..self.fractions.len() {
            out.push_str(&format!(
                "{},{},{}\n",
                fmt_float(self.fractions[i]),
                fmt_float(self.distances[i]),
                fmt_float(self.max_relative_change[i])
            ));
        }
        out
    }
}

fn std_dev(f: &EdgeFunction) -> f64 {
    let n = f.len() as f64;
    if f.len() < 2 {
        return 0.0;
    }
    let mean = f.values().sum::<f64>() / n;
    (f.values().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt()
}

// Graphs whose unperturbed curvature is constant have no scale and are
// skipped.
fn max_relative_change(before: &EdgeFunction, after: &EdgeFunction) -> f64 {
    let sigma = std_dev(before);
    if sigma == 0.0 {
        return 0.0;
    }
    before
        .entries()
        .iter()
        .filter_map(|&((u, v), k)| after.get(u, v).map(|k2| (k - k2).abs() / sigma))
        .fold(0.0, f64::max)
}

/// Perturbs every graph at each fraction and measures the set distance to
/// the unperturbed set.
///
/// Graph `i` at fraction index `j` is perturbed with a seed drawn from
/// stream `j` of `seed`. Connectivity is not preserved.
pub fn perturbation_sweep(
    base: &GraphSet,
    mode: PerturbMode,
    fractions: &[f64],
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<PerturbationReport> {
    base.ensure_non_empty()?;
    if fractions.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain("fractions must be ascending".into()));
    }
    let mut distances = Vec::with_capacity(fractions.len());
    let mut changes = Vec::with_capacity(fractions.len());
    for (j, &fraction) in fractions.iter().enumerate() {
        let mut r = stream_rng(seed, j as u64);
        let seeds: Vec<u64> = (0..base.len()).map(|_| r.random()).collect();
        let perturbed: Vec<Graph> = base
            .graphs
            .par_iter()
            .zip(&seeds)
            .enumerate()
            .map(|(i, (g, &s))| {
                perturb(g, &PerturbationSpec::new(mode, fraction, s)).map_err(Error::at_graph(i))
            })
            .collect::<Result<_>>()?;
        let all: Vec<&Graph> = perturbed.iter().chain(base.iter()).collect();
        let prepared = prepare_landscapes(&all, cfg)?;
        let k = base.len();
        let (ia, ib): (Vec<usize>, Vec<usize>) = ((0..k).collect(), (k..2 * k).collect());
        distances.push(distance_between_groups(&prepared, &ia, &ib, cfg)?);
        changes.push(
            (0..k)
                .map(|i| max_relative_change(&prepared.functions[k + i], &prepared.functions[i]))
                .fold(0.0, f64::max),
        );
    }
    let pearson = pearson(fractions, &distances).ok();
    Ok(PerturbationReport {
        mode,
        fractions: fractions.to_vec(),
        distances,
        pearson,
        max_relative_change: changes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::CurvatureKind;
    use crate::graph::generate_community;

    fn base() -> GraphSet {
        (0..4).map(|s| generate_community(16, s).unwrap()).collect()
    }

    fn cfg() -> PipelineConfig {
        PipelineConfig {
            resolution: 200,
            ..PipelineConfig::with_kind(CurvatureKind::Frc)
        }
    }

    #[test]
    fn zero_fraction_only() {
        let r = perturbation_sweep(&base(), PerturbMode::Add, &[0.0], &cfg(), 1).unwrap();
        assert_eq!(r.distances, vec![0.0]);
        assert_eq!(r.max_relative_change, vec![0.0]);
        assert!(matches!(r.correlation(), Err(Error::UndefinedCorrelation)));
    }

    #[test]
    fn distance_grows_with_fraction() {
        let fractions = [0.0, 0.2, 0.4, 0.6, 0.8];
        for mode in [PerturbMode::Add, PerturbMode::Delete] {
            let r = perturbation_sweep(&base(), mode, &fractions, &cfg(), 3).unwrap();
            assert_eq!(r.distances.len(), fractions.len());
            assert_eq!(r.distances[0], 0.0);
            assert!(r.correlation().unwrap() > 0.5, "{mode}: {:?}", r.distances);
            assert!(r.max_relative_change[4] > 0.0);
        }
    }

    #[test]
    fn reproducible_and_validated() {
        let f = [0.0, 0.3];
        let a = perturbation_sweep(&base(), PerturbMode::Delete, &f, &cfg(), 5).unwrap();
        let b = perturbation_sweep(&base(), PerturbMode::Delete, &f, &cfg(), 5).unwrap();
        assert_eq!(a, b);
        assert!(perturbation_sweep(&base(), PerturbMode::Add, &[0.5, 0.1], &cfg(), 5).is_err());
        assert!(perturbation_sweep(&base(), PerturbMode::Add, &[1.0], &cfg(), 5).is_err());
    }

    #[test]
    fn relative_change_by_hand() {
        let before = EdgeFunction::new([((0, 1), 0.0), ((1, 2), 2.0)]).unwrap();
        let after = EdgeFunction::new([((0, 1), 3.0), ((2, 3), 9.0)]).unwrap();
        // σ = 1; only (0, 1) survives, changing by 3.
        assert_eq!(max_relative_change(&before, &after), 3.0);
    }
}
