//! Distribution-level statistics and experiment harnesses.

mod bounds;
mod cluster;
mod correlation;
mod distinguish;
mod graphon;
mod permutation;
mod perturbation;

pub use bounds::{
    check_forman_bounds, check_orc_bounds, check_resistance_bounds, delta_add, delta_del,
    normalized_adjacency_lambda2, BoundCheckReport, BoundTheorem, BOUND_TOLERANCE,
};
pub use cluster::{adjusted_rand_index, kmeans, spectral_cluster, KMEANS_MAX_ITERATIONS};
pub use correlation::pearson;
pub use distinguish::{
    pairwise_distinguish, wasserstein_1d, DistinguishMethod, DistinguishReport,
    DISTINGUISH_TOLERANCE,
};
pub use graphon::{
    graphon_clustering, graphon_experiment, graphon_samples, graphon_test, GraphonClustering,
    GraphonReport, GraphonTest,
};
pub use permutation::{permutation_test, permutation_test_prepared, PermutationTestResult};
pub use perturbation::{perturbation_sweep, PerturbationReport};
