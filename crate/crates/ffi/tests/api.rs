use std::ffi::{CStr, CString};
use std::ptr;

use curvscape_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(cs_last_error()) }.to_string_lossy().into_owned()
}

fn named(name: &str) -> *mut CsGraph {
    let name = CString::new(name).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { cs_graph_named(name.as_ptr(), &mut g) }, CsStatus::Ok);
    g
}

fn curvature_of(g: *const CsGraph, kind: CsCurvature) -> *mut CsEdgeFunction {
    let cfg = CsPipelineConfig {
        kind,
        ..cs_pipeline_config_default()
    };
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { cs_curvature(g, &cfg, &mut f) }, CsStatus::Ok, "{}", last_error());
    f
}

fn values(f: *const CsEdgeFunction) -> Vec<(usize, usize, f64)> {
    (0..unsafe { cs_edge_function_len(f) })
        .map(|i| {
            let (mut u, mut v, mut x) = (0, 0, 0.0);
            assert_eq!(unsafe { cs_edge_function_get(f, i, &mut u, &mut v, &mut x) }, CsStatus::Ok);
            (u, v, x)
        })
        .collect()
}

#[test]
fn triangle_curvatures() {
    let g = named("k3");
    for (kind, expected) in [(CsCurvature::Frc, 3.0), (CsCurvature::Orc, 0.5), (CsCurvature::Rec, 2.0)] {
        let f = curvature_of(g, kind);
        let vals = values(f);
        assert_eq!(vals.iter().map(|e| (e.0, e.1)).collect::<Vec<_>>(), [(0, 1), (0, 2), (1, 2)]);
        for (_, _, x) in vals {
            assert!((x - expected).abs() < 1e-9, "{kind:?}: {x}");
        }
        unsafe { cs_edge_function_free(f) };
    }
    unsafe { cs_graph_free(g) };
}

#[test]
fn graph_from_endpoints() {
    let endpoints = [0usize, 1, 1, 2, 2, 3];
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { cs_graph_new(4, endpoints.as_ptr(), 3, &mut g) }, CsStatus::Ok);
    assert_eq!(unsafe { cs_graph_vertex_count(g) }, 4);
    assert_eq!(unsafe { cs_graph_edge_count(g) }, 3);
    unsafe { cs_graph_free(g) };

    let bad = [0usize, 9];
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { cs_graph_new(4, bad.as_ptr(), 1, &mut h) }, CsStatus::Input);
    assert!(h.is_null());
    assert!(last_error().contains("invalid edge"), "{}", last_error());
}

#[test]
fn diagrams_and_bottleneck() {
    let a = named("rook4x4");
    let b = named("shrikhande");
    let diagram = |g: *const CsGraph| {
        let f = curvature_of(g, CsCurvature::Orc);
        let mut d = ptr::null_mut();
        assert_eq!(unsafe { cs_diagram(g, f, &mut d) }, CsStatus::Ok);
        unsafe { cs_edge_function_free(f) };
        d
    };
    let (da, db) = (diagram(a), diagram(b));
    assert_eq!(unsafe { cs_diagram_len(da, 0) }, 16);
    assert_eq!(unsafe { cs_diagram_len(da, 1) }, 48 - 15);
    assert_eq!(unsafe { cs_diagram_len(da, 2) }, 0);
    let (mut birth, mut death) = (0.0, 0.0);
    assert_eq!(unsafe { cs_diagram_pair(da, 1, 0, &mut birth, &mut death) }, CsStatus::Ok);
    assert!(death.is_infinite());
    assert_eq!(
        unsafe { cs_diagram_pair(da, 5, 0, &mut birth, &mut death) },
        CsStatus::InvalidArgument
    );
    let mut dist = -1.0;
    assert_eq!(unsafe { cs_bottleneck(da, db, &mut dist) }, CsStatus::Ok);
    assert!(dist > 1e-8);
    assert_eq!(unsafe { cs_bottleneck(da, da, &mut dist) }, CsStatus::Ok);
    assert_eq!(dist, 0.0);
    unsafe {
        cs_diagram_free(da);
        cs_diagram_free(db);
        cs_graph_free(a);
        cs_graph_free(b);
    }
}

#[test]
fn set_distance_and_permutation_test() {
    let a = cs_graph_set_new();
    let b = cs_graph_set_new();
    let (k3, c4) = (named("k3"), named("c4"));
    for _ in 0..3 {
        assert_eq!(unsafe { cs_graph_set_push(a, k3) }, CsStatus::Ok);
        assert_eq!(unsafe { cs_graph_set_push(b, c4) }, CsStatus::Ok);
    }
    assert_eq!(unsafe { cs_graph_set_len(a) }, 3);
    let cfg = CsPipelineConfig {
        kind: CsCurvature::Frc,
        resolution: 200,
        ..cs_pipeline_config_default()
    };
    let mut d = -1.0;
    assert_eq!(unsafe { cs_set_distance(a, a, &cfg, &mut d) }, CsStatus::Ok);
    assert_eq!(d, 0.0);
    assert_eq!(unsafe { cs_set_distance(a, b, &cfg, &mut d) }, CsStatus::Ok);
    assert!(d > 0.0);
    let (mut observed, mut higher) = (0.0, 0.0);
    let status = unsafe { cs_permutation_test(a, b, &cfg, 50, 7, &mut observed, &mut higher) };
    assert_eq!(status, CsStatus::Ok);
    assert_eq!(observed, d);
    assert!((0.0..=1.0).contains(&higher));
    unsafe {
        cs_graph_set_free(a);
        cs_graph_set_free(b);
        cs_graph_free(k3);
        cs_graph_free(c4);
    }
}

#[test]
fn errors_are_reported() {
    let empty = cs_graph_set_new();
    let one = cs_graph_set_new();
    let k3 = named("k3");
    unsafe { cs_graph_set_push(one, k3) };
    let cfg = cs_pipeline_config_default();
    let mut d = 0.0;
    assert_eq!(unsafe { cs_set_distance(empty, one, &cfg, &mut d) }, CsStatus::Input);
    assert!(last_error().contains("empty"), "{}", last_error());

    let bad = CsPipelineConfig {
        resolution: 1,
        ..cfg
    };
    assert_eq!(unsafe { cs_set_distance(one, one, &bad, &mut d) }, CsStatus::Domain);
    assert_eq!(unsafe { cs_set_distance(ptr::null(), one, &cfg, &mut d) }, CsStatus::NullPointer);
    assert_eq!(unsafe { cs_set_distance(one, one, &cfg, ptr::null_mut()) }, CsStatus::NullPointer);

    let path = CString::new("/nonexistent/graph.edges").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { cs_graph_read(path.as_ptr(), &mut g) }, CsStatus::Input);

    let mut f = ptr::null_mut();
    let orc = CsPipelineConfig {
        rw_steps: 0,
        measure: CsMeasure::RandomWalk,
        ..cfg
    };
    assert_eq!(unsafe { cs_curvature(k3, &orc, &mut f) }, CsStatus::Domain);

    unsafe {
        cs_graph_set_free(empty);
        cs_graph_set_free(one);
        cs_graph_free(k3);
        // Freeing null is a no-op.
        cs_graph_free(ptr::null_mut());
    }
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(cs_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
