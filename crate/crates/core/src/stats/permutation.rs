use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{stream_rng, Graph, GraphSet};
use crate::landscape::{distance_between_groups, prepare_landscapes, PipelineConfig, PreparedLandscapes};
use crate::report::{json_float, json_floats};

#[derive(Debug, Clone, PartialEq)]
pub struct PermutationTestResult {
    pub observed_distance: f64,
    pub permuted_distances: Vec<f64>,
    /// Share of permutations whose distance strictly exceeds the observed one.
    pub fraction_higher: f64,
    pub n_permutations: usize,
    pub seed: u64,
}

impl PermutationTestResult {
    pub fn to_json(&self) -> Value {
        json!({
            "observed_distance": json_float(self.observed_distance),
            "fraction_higher": json_float(self.fraction_higher),
            "n_permutations": self.n_permutations,
            "seed": self.seed,
            "permuted_distances": json_floats(&self.permuted_distances),
        })
    }
}

/// Two-sample permutation test on the set distance.
///
/// Landscapes are computed once per graph; each permutation only re-splits
/// the pooled sample and re-averages. Permutation `k` draws from its own
/// random stream, so results do not depend on scheduling.
pub fn permutation_test(
    a: &GraphSet,
    b: &GraphSet,
    cfg: &PipelineConfig,
    n_perm: usize,
    seed: u64,
) -> Result<PermutationTestResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Domain(format!(
            "permutation test needs at least 2 graphs per set, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if n_perm == 0 {
        return Err(Error::Domain("number of permutations must be at least 1".into()));
    }
    let all: Vec<&Graph> = a.iter().chain(b.iter()).collect();
    let prepared = prepare_landscapes(&all, cfg)?;
    permutation_test_prepared(&prepared, a.len(), cfg, n_perm, seed)
}

/// Permutation test on precomputed landscapes; the first `size_a` belong to
/// the first sample.
pub fn permutation_test_prepared(
    prepared: &PreparedLandscapes,
    size_a: usize,
    cfg: &PipelineConfig,
    n_perm: usize,
    seed: u64,
) -> Result<PermutationTestResult> {
    let total = prepared.len();
    if size_a == 0 || size_a >= total {
        return Err(Error::Domain(format!("invalid split {size_a} of {total}")));
    }
    if n_perm == 0 {
        return Err(Error::Domain("number of permutations must be at least 1".into()));
    }
    let pooled: Vec<usize> = (0..total).collect();
    let observed = distance_between_groups(prepared, &pooled[..size_a], &pooled[size_a..], cfg)?;
    let permuted: Vec<f64> = (0..n_perm as u64)
        .into_par_iter()
        .map(|k| {
            let mut idx = pooled.clone();
            idx.shuffle(&mut stream_rng(seed, k));
            distance_between_groups(prepared, &idx[..size_a], &idx[size_a..], cfg)
        })
        .collect::<Result<_>>()?;
    let higher = permuted.iter().filter(|&&d| d > observed).count();
    Ok(PermutationTestResult {
        observed_distance: observed,
        fraction_higher: higher as f64 / n_perm as f64,
        permuted_distances: permuted,
        n_permutations: n_perm,
        seed,
    })
}
