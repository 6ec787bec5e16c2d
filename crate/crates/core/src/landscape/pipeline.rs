use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{
    average_refs, landscape_distance, to_landscape_with_depth, DistanceMode, LandscapeGrid, Norm,
    PersistenceLandscape, DEFAULT_MAX_DEPTH, DEFAULT_RESOLUTION,
};
use crate::curvature::{curvature, CurvatureKind, EdgeFunction, MeasureConfig};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphSet};
use crate::persistence::{diagram_of, PersistenceDiagram};
use crate::report::json_float;

/// Every knob of the curvature → diagram → landscape → distance pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub kind: CurvatureKind,
    pub measure: MeasureConfig,
    pub resolution: usize,
    /// Distance above the largest filtration value at which essential
    /// classes are cut off; `None` means `max(1, value range)`.
    pub cap_padding: Option<f64>,
    pub norm: Norm,
    pub mode: DistanceMode,
    pub max_depth: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            kind: CurvatureKind::Orc,
            measure: MeasureConfig::default(),
            resolution: DEFAULT_RESOLUTION,
            cap_padding: None,
            norm: Norm::Sup,
            mode: DistanceMode::NormOfDiff,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

impl PipelineConfig {
    pub fn with_kind(kind: CurvatureKind) -> Self {
        PipelineConfig {
            kind,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.measure.validate()?;
        if self.resolution < 2 {
            return Err(Error::Domain("grid resolution must be at least 2".into()));
        }
        if let Some(c) = self.cap_padding {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::Domain(format!("cap padding {c} must be positive")));
            }
        }
        if self.max_depth == 0 {
            return Err(Error::Domain("landscape depth must be at least 1".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.to_string(),
            "measure": {
                "kind": self.measure.kind.to_string(),
                "steps": self.measure.steps,
                "self_mass": json_float(self.measure.self_mass),
            },
            "resolution": self.resolution,
            "cap_padding": self.cap_padding.map_or(Value::String("auto".into()), json_float),
            "norm": self.norm.to_string(),
            "mode": self.mode.to_string(),
            "max_depth": self.max_depth,
        })
    }
}

/// Per-graph pipeline products on one shared grid.
#[derive(Debug, Clone)]
pub struct PreparedLandscapes {
    pub grid: LandscapeGrid,
    pub functions: Vec<EdgeFunction>,
    pub diagrams: Vec<PersistenceDiagram>,
    pub landscapes: Vec<PersistenceLandscape>,
}

impl PreparedLandscapes {
    pub fn len(&self) -> usize {
        self.landscapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.landscapes.is_empty()
    }
}

/// Curvature, diagram and landscape of every graph.
///
/// The grid spans the smallest to the largest curvature value over all
/// graphs, plus the cap padding. Failures carry the graph's position.
pub fn prepare_landscapes(graphs: &[&Graph], cfg: &PipelineConfig) -> Result<PreparedLandscapes> {
    cfg.validate()?;
    let staged: Vec<(EdgeFunction, PersistenceDiagram)> = graphs
        .par_iter()
        .map(|g| {
            let f = curvature(g, cfg.kind, &cfg.measure)?;
            let d = diagram_of(g, &f)?;
            Ok((f, d))
        })
        .enumerate()
        .map(|(i, r): (usize, Result<_>)| r.map_err(Error::at_graph(i)))
        .collect::<Result<_>>()?;
    let (functions, diagrams): (Vec<_>, Vec<_>) = staged.into_iter().unzip();

    let values = functions.iter().flat_map(|f| f.values());
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
        (lo.min(x), hi.max(x))
    });
    let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 0.0) };
    let grid = LandscapeGrid::covering(lo, hi, cfg.resolution, cfg.cap_padding)?;

    let landscapes = diagrams
        .par_iter()
        .enumerate()
        .map(|(i, d)| to_landscape_with_depth(d, &grid, cfg.max_depth).map_err(Error::at_graph(i)))
        .collect::<Result<_>>()?;
    Ok(PreparedLandscapes {
        grid,
        functions,
        diagrams,
        landscapes,
    })
}

/// Distance between the averaged landscapes of two index groups.
pub fn distance_between_groups(
    prepared: &PreparedLandscapes,
    a: &[usize],
    b: &[usize],
    cfg: &PipelineConfig,
) -> Result<f64> {
    let pick = |idx: &[usize]| {
        let ls: Vec<&PersistenceLandscape> = idx.iter().map(|&i| &prepared.landscapes[i]).collect();
        average_refs(&ls)
    };
    Ok(landscape_distance(&pick(a)?, &pick(b)?, cfg.norm, cfg.mode))
}

/// Symmetric matrix of distances between individual graph landscapes.
pub fn pairwise_landscape_distances(prepared: &PreparedLandscapes, cfg: &PipelineConfig) -> Vec<Vec<f64>> {
    let n = prepared.len();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| landscape_distance(&prepared.landscapes[i], &prepared.landscapes[j], cfg.norm, cfg.mode))
                .collect()
        })
        .collect();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for (off, &x) in upper[i].iter().enumerate() {
            d[i][i + 1 + off] = x;
            d[i + 1 + off][i] = x;
        }
    }
    d
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    pub distance: f64,
    pub config: PipelineConfig,
    pub sizes: (usize, usize),
    pub grid: LandscapeGrid,
}

impl DistanceReport {
    pub fn to_json(&self) -> Value {
        json!({
            "distance": json_float(self.distance),
            "sizes": [self.sizes.0, self.sizes.1],
            "grid": {
                "lo": json_float(self.grid.lo),
                "hi": json_float(self.grid.hi),
                "res": self.grid.resolution,
            },
            "config": self.config.to_json(),
        })
    }
}

/// Distance between two graph sets: average landscape per set, then the
/// configured landscape distance. Graph indices in errors count `a` first,
/// then `b`.
pub fn set_distance(a: &GraphSet, b: &GraphSet, cfg: &PipelineConfig) -> Result<DistanceReport> {
    a.ensure_non_empty()?;
    b.ensure_non_empty()?;
    let all: Vec<&Graph> = a.iter().chain(b.iter()).collect();
    let prepared = prepare_landscapes(&all, cfg)?;
    let (ia, ib): (Vec<usize>, Vec<usize>) = ((0..a.len()).collect(), (a.len()..all.len()).collect());
    Ok(DistanceReport {
        distance: distance_between_groups(&prepared, &ia, &ib, cfg)?,
        config: *cfg,
        sizes: (a.len(), b.len()),
        grid: prepared.grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_er, named_graph};

    fn er_set(p: f64, seeds: std::ops::Range<u64>) -> GraphSet {
        seeds.map(|s| generate_er(20, p, s).unwrap()).collect()
    }

    #[test]
    fn identical_sets_are_at_zero() {
        let a = er_set(0.3, 0..4);
        let mut shuffled = a.clone();
        shuffled.graphs.reverse();
        for kind in CurvatureKind::ALL {
            let cfg = PipelineConfig::with_kind(kind);
            assert_eq!(set_distance(&a, &a, &cfg).unwrap().distance, 0.0);
            assert!(set_distance(&a, &shuffled, &cfg).unwrap().distance < 1e-12);
        }
    }

    #[test]
    fn sparse_and_dense_er_differ() {
        let cfg = PipelineConfig::default();
        let r = set_distance(&er_set(0.2, 0..10), &er_set(0.6, 100..110), &cfg).unwrap();
        assert!(r.distance > 1e-8, "{}", r.distance);
        assert_eq!(r.sizes, (10, 10));
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let a: GraphSet = [named_graph("k3").unwrap()].into_iter().collect();
        let b: GraphSet = [named_graph("k3").unwrap(), Graph::new(3, [(0, 1)]).unwrap()]
            .into_iter()
            .collect();
        let bad = PipelineConfig {
            measure: MeasureConfig {
                steps: 0,
                ..MeasureConfig::default()
            },
            ..PipelineConfig::default()
        };
        assert!(matches!(set_distance(&a, &b, &bad), Err(Error::Domain(_))));
        assert!(set_distance(&a, &GraphSet::default(), &PipelineConfig::default()).is_err());
        // An isolated vertex is fine: it never enters the filtration.
        assert!(set_distance(&a, &b, &PipelineConfig::default()).is_ok());
    }

    #[test]
    fn edgeless_graphs_give_zero_landscapes() {
        let a: GraphSet = [Graph::empty(4)].into_iter().collect();
        let r = set_distance(&a, &a, &PipelineConfig::with_kind(CurvatureKind::Frc)).unwrap();
        assert_eq!(r.distance, 0.0);
    }

    #[test]
    fn report_echoes_config() {
        let a = er_set(0.3, 0..2);
        let r = set_distance(&a, &a, &PipelineConfig::default()).unwrap();
        let v = r.to_json();
        assert_eq!(v["config"]["kind"], "orc");
        assert_eq!(v["config"]["norm"], "sup");
        assert_eq!(v["config"]["mode"], "norm_of_diff");
        assert_eq!(v["config"]["measure"]["kind"], "uniform");
    }
}
