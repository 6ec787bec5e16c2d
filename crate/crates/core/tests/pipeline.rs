use curvscape::curvature::CurvatureKind;
use curvscape::graph::{generate_er, load_graph_set, sample_set, to_edge_list, write_jsonl, GraphSet};
use curvscape::landscape::{set_distance, DistanceMode, Norm, PipelineConfig};
use curvscape::report::to_json_text;
use curvscape::stats::permutation_test;
use tempfile::TempDir;

fn er(n: usize, p: f64, count: usize, seed: u64) -> GraphSet {
    GraphSet::new(sample_set(count, seed, |s| generate_er(n, p, s)).unwrap())
}

#[test]
fn directory_and_jsonl_sets_agree() {
    let set = er(12, 0.4, 5, 3);
    let dir = TempDir::new().unwrap();
    let edges = dir.path().join("edges");
    std::fs::create_dir(&edges).unwrap();
    for (i, g) in set.iter().enumerate() {
        std::fs::write(edges.join(format!("g{i}.edges")), to_edge_list(g)).unwrap();
    }
    let jsonl = dir.path().join("set.jsonl");
    std::fs::write(&jsonl, write_jsonl(&set.graphs)).unwrap();

    let from_dir = load_graph_set(&edges).unwrap();
    let from_jsonl = load_graph_set(&jsonl).unwrap();
    assert_eq!(from_dir.graphs, set.graphs);
    assert_eq!(from_jsonl.graphs, set.graphs);
    assert_eq!(from_dir.labels, ["g0", "g1", "g2", "g3", "g4"]);
}

#[test]
fn density_gap_is_detected_by_every_configuration() {
    let sparse = er(16, 0.15, 8, 1);
    let dense = er(16, 0.6, 8, 2);
    for kind in CurvatureKind::ALL {
        for norm in [Norm::L1, Norm::L2, Norm::Sup] {
            for mode in [DistanceMode::NormOfDiff, DistanceMode::Alg2] {
                let cfg = PipelineConfig {
                    kind,
                    norm,
                    mode,
                    resolution: 200,
                    ..PipelineConfig::default()
                };
                let between = set_distance(&sparse, &dense, &cfg).unwrap().distance;
                let within = set_distance(&sparse, &sparse, &cfg).unwrap().distance;
                assert_eq!(within, 0.0);
                assert!(between > 1e-8, "{kind} {norm} {mode}: {between}");
            }
        }
    }
}

#[test]
fn permutation_test_separates_dense_from_sparse() {
    let cfg = PipelineConfig {
        kind: CurvatureKind::Frc,
        resolution: 200,
        ..PipelineConfig::default()
    };
    let r = permutation_test(&er(16, 0.15, 8, 1), &er(16, 0.6, 8, 2), &cfg, 100, 9).unwrap();
    assert!(r.fraction_higher < 0.05, "{}", r.fraction_higher);
    assert_eq!(r.permuted_distances.len(), 100);
}

#[test]
fn reports_serialise_identically() {
    let cfg = PipelineConfig::default();
    let a = set_distance(&er(10, 0.3, 3, 1), &er(10, 0.5, 3, 2), &cfg).unwrap();
    let b = set_distance(&er(10, 0.3, 3, 1), &er(10, 0.5, 3, 2), &cfg).unwrap();
    assert_eq!(to_json_text(&a.to_json()), to_json_text(&b.to_json()));
}
