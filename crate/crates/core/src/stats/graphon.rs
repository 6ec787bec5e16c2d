use std::ops::RangeInclusive;

use serde_json::{json, Value};

use super::{adjusted_rand_index, permutation_test, spectral_cluster, PermutationTestResult};
use crate::error::{Error, Result};
use crate::graph::{member_seed, sample_graphon_set, Graph, GraphSet, Graphon};
use crate::landscape::{pairwise_landscape_distances, prepare_landscapes, PipelineConfig};
use crate::report::json_float;

/// Two-sample test between one pair of graphons.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphonTest {
    pub pair: (Graphon, Graphon),
    pub samples: usize,
    pub result: PermutationTestResult,
}

/// Spectral clustering of landscapes sampled from several graphons.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphonClustering {
    pub graphons: Vec<Graphon>,
    pub truth: Vec<usize>,
    pub predicted: Vec<usize>,
    pub ari: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphonReport {
    pub sizes: RangeInclusive<usize>,
    pub test: GraphonTest,
    pub clustering: GraphonClustering,
}

impl GraphonReport {
    pub fn to_json(&self) -> Value {
        json!({
            "sizes": [self.sizes.start(), self.sizes.end()],
            "test": {
                "pair": [self.test.pair.0.to_string(), self.test.pair.1.to_string()],
                "samples": self.test.samples,
                "result": self.test.result.to_json(),
            },
            "clustering": {
                "graphons": self.clustering.graphons.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "truth": self.clustering.truth,
                "predicted": self.clustering.predicted,
                "ari": json_float(self.clustering.ari),
            },
        })
    }
}

/// Samples `count` graphs from each graphon, stream `k` of `seed` for the
/// `k`-th graphon, and returns them with their ground-truth labels.
pub fn graphon_samples(
    graphons: &[Graphon],
    count: usize,
    sizes: RangeInclusive<usize>,
    seed: u64,
) -> Result<(Vec<Graph>, Vec<usize>)> {
    let mut graphs = Vec::with_capacity(graphons.len() * count);
    let mut truth = Vec::with_capacity(graphons.len() * count);
    for (k, &w) in graphons.iter().enumerate() {
        graphs.extend(sample_graphon_set(w, count, sizes.clone(), member_seed(seed, k as u64))?);
        truth.extend(std::iter::repeat_n(k, count));
    }
    Ok((graphs, truth))
}

/// Permutation test between two graphons with `samples` graphs each.
pub fn graphon_test(
    pair: (Graphon, Graphon),
    samples: usize,
    sizes: RangeInclusive<usize>,
    cfg: &PipelineConfig,
    n_perm: usize,
    seed: u64,
) -> Result<GraphonTest> {
    let (graphs, _) = graphon_samples(&[pair.0, pair.1], samples, sizes, seed)?;
    let (a, b) = graphs.split_at(samples);
    let result = permutation_test(
        &GraphSet::new(a.to_vec()),
        &GraphSet::new(b.to_vec()),
        cfg,
        n_perm,
        seed,
    )?;
    Ok(GraphonTest { pair, samples, result })
}

/// Clusters individual graph landscapes into one group per graphon and
/// scores the partition against the truth with the adjusted Rand index.
pub fn graphon_clustering(
    graphons: &[Graphon],
    samples: usize,
    sizes: RangeInclusive<usize>,
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<GraphonClustering> {
    if graphons.len() < 2 || samples == 0 {
        return Err(Error::Domain("clustering needs at least two graphons and one sample each".into()));
    }
    let (graphs, truth) = graphon_samples(graphons, samples, sizes, seed)?;
    let refs: Vec<&Graph> = graphs.iter().collect();
    let prepared = prepare_landscapes(&refs, cfg)?;
    let dist = pairwise_landscape_distances(&prepared, cfg);
    let predicted = spectral_cluster(&dist, graphons.len(), seed)?;
    let ari = adjusted_rand_index(&truth, &predicted)?;
    Ok(GraphonClustering {
        graphons: graphons.to_vec(),
        truth,
        predicted,
        ari,
    })
}

/// The full graphon experiment: one permutation test and one clustering run.
#[allow(clippy::too_many_arguments)]
pub fn graphon_experiment(
    pair: (Graphon, Graphon),
    samples: usize,
    n_perm: usize,
    cluster_graphons: &[Graphon],
    cluster_samples: usize,
    sizes: RangeInclusive<usize>,
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<GraphonReport> {
    Ok(GraphonReport {
        test: graphon_test(pair, samples, sizes.clone(), cfg, n_perm, seed)?,
        clustering: graphon_clustering(cluster_graphons, cluster_samples, sizes.clone(), cfg, seed)?,
        sizes,
    })
}
