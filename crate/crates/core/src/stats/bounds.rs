use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::curvature::{
    forman_edge, jump, resistance_curvature_with, resistance_data, wasserstein1, MeasureConfig,
    OllivierContext, ResistanceData,
};
use crate::error::{Error, Result};
use crate::graph::{stream_rng, Edge, Graph};
use crate::report::json_float;

/// Slack allowed for floating-point noise before a margin counts as a
/// violation.
pub const BOUND_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundTheorem {
    FormanAdd,
    FormanDel,
    Orc,
    RecAdd,
    RecDel,
}

impl fmt::Display for BoundTheorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundTheorem::FormanAdd => "forman_add",
            BoundTheorem::FormanDel => "forman_del",
            BoundTheorem::Orc => "orc",
            BoundTheorem::RecAdd => "rec_add",
            BoundTheorem::RecDel => "rec_del",
        })
    }
}

/// Outcome of checking one family of inequalities over random single-edge
/// perturbations. `worst_margin` is the smallest `bound - observed` seen
/// (negative when violated); `samples` counts individual inequalities.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheckReport {
    pub theorem: BoundTheorem,
    pub trials: usize,
    pub samples: usize,
    pub violations: usize,
    pub worst_margin: f64,
    pub auxiliaries: BTreeMap<String, f64>,
}

impl BoundCheckReport {
    pub fn to_json(&self) -> Value {
        json!({
            "theorem": self.theorem.to_string(),
            "trials": self.trials,
            "samples": self.samples,
            "violations": self.violations,
            "worst_margin": json_float(self.worst_margin),
            "auxiliaries": self.auxiliaries.iter()
                .map(|(k, &v)| (k.clone(), json_float(v)))
                .collect::<serde_json::Map<_, _>>(),
        })
    }

    pub const CSV_HEADER: &'static str = "theorem,trials,samples,violations,worst_margin";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.theorem,
            self.trials,
            self.samples,
            self.violations,
            crate::report::fmt_float(self.worst_margin)
        )
    }
}

#[derive(Clone, Copy)]
enum Agg {
    Max,
    Min,
    Sum,
}

/// Margins and auxiliary quantities gathered in one trial.
#[derive(Default)]
struct Tally {
    margins: Vec<(&'static str, f64)>,
    aux: Vec<(&'static str, Agg, f64)>,
}

impl Tally {
    fn check(&mut self, tag: &'static str, margin: f64) {
        self.margins.push((tag, margin));
    }

    fn note(&mut self, key: &'static str, agg: Agg, value: f64) {
        self.aux.push((key, agg, value));
    }
}

// Sequential fold in trial order keeps the report independent of how the
// trials were scheduled.
fn summarise(theorem: BoundTheorem, trials: usize, tallies: Vec<Tally>) -> BoundCheckReport {
    let mut report = BoundCheckReport {
        theorem,
        trials,
        samples: 0,
        violations: 0,
        worst_margin: f64::INFINITY,
        auxiliaries: BTreeMap::new(),
    };
    for t in tallies {
        for (tag, m) in t.margins {
            report.samples += 1;
            report.worst_margin = report.worst_margin.min(m);
            let key = format!("{tag}_violations");
            let slot = report.auxiliaries.entry(key).or_insert(0.0);
            if m < -BOUND_TOLERANCE {
                report.violations += 1;
                *slot += 1.0;
            }
        }
        for (key, agg, v) in t.aux {
            let slot = report.auxiliaries.entry(key.to_string());
            match slot {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(v);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let cur = e.get_mut();
                    *cur = match agg {
                        Agg::Max => cur.max(v),
                        Agg::Min => cur.min(v),
                        Agg::Sum => *cur + v,
                    };
                }
            }
        }
    }
    report
}

fn non_edges(g: &Graph) -> Vec<Edge> {
    (0..g.n())
        .flat_map(|u| ((u + 1)..g.n()).map(move |v| (u, v)))
        .filter(|&(u, v)| !g.has_edge(u, v))
        .collect()
}

fn non_bridges(g: &Graph) -> Vec<Edge> {
    let base = g.component_count();
    g.edges()
        .iter()
        .copied()
        .filter(|&e| g.without_edges(&[e]).component_count() == base)
        .collect()
}

fn pick(r: &mut impl Rng, from: &[Edge]) -> Option<Edge> {
    (!from.is_empty()).then(|| from[r.random_range(0..from.len())])
}

struct Perturbations {
    added: Option<(Edge, Graph)>,
    deleted: Option<(Edge, Graph)>,
}

/// Trial `t` adds one uniformly chosen non-edge and, separately, deletes one
/// uniformly chosen edge (only non-bridges when `keep_connected`).
fn trial_perturbations(g: &Graph, seed: u64, t: u64, keep_connected: bool) -> Perturbations {
    let mut r = stream_rng(seed, t);
    let candidates = non_edges(g);
    let added = pick(&mut r, &candidates).map(|e| {
        (e, g.with_edges([e]).expect("non-edge of a valid graph"))
    });
    let removable = if keep_connected {
        non_bridges(g)
    } else {
        g.edges().to_vec()
    };
    let deleted = pick(&mut r, &removable).map(|e| (e, g.without_edges(&[e])));
    Perturbations { added, deleted }
}

fn require_connected(g: &Graph) -> Result<()> {
    if g.n() < 2 || !g.is_connected() {
        return Err(Error::Domain("bound check requires a connected graph".into()));
    }
    Ok(())
}

/// Forman–Ricci under one added or deleted edge: every surviving edge moves
/// by at most `-1..=+2` on addition and `-2..=+1` on deletion.
pub fn check_forman_bounds(g: &Graph, trials: usize, seed: u64) -> Vec<BoundCheckReport> {
    let outcomes: Vec<(Tally, Tally)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let p = trial_perturbations(g, seed, t, false);
            let mut add = Tally::default();
            let mut del = Tally::default();
            let run = |tally: &mut Tally, h: &Graph, removed: Option<Edge>, lo: f64, hi: f64| {
                for &(i, j) in g.edges() {
                    if Some((i, j)) == removed {
                        continue;
                    }
                    let (k, k2) = (forman_edge(g, i, j), forman_edge(h, i, j));
                    tally.check("lower", k2 - (k + lo));
                    tally.check("upper", (k + hi) - k2);
                    tally.note("max_change", Agg::Max, k2 - k);
                    tally.note("min_change", Agg::Min, k2 - k);
                }
            };
            if let Some((_, h)) = &p.added {
                run(&mut add, h, None, -1.0, 2.0);
            }
            if let Some((e, h)) = &p.deleted {
                run(&mut del, h, Some(*e), -2.0, 1.0);
            }
            (add, del)
        })
        .collect();
    let (add, del): (Vec<_>, Vec<_>) = outcomes.into_iter().unzip();
    vec![
        summarise(BoundTheorem::FormanAdd, trials, add),
        summarise(BoundTheorem::FormanDel, trials, del),
    ]
}

/// Ollivier–Ricci after one added or deleted edge, on every surviving edge:
///
/// `1 - (2 W'_max + W'(μ_i, μ_j)) / d'(i, j) <= ORC'(i, j) <= (J'(i) + J'(j)) / d'(i, j)`
///
/// with `J'(v) = W'(δ_v, μ'_v)` and `W'_max = max_x W'(μ_x, μ'_x)`. Primed
/// transport distances use the perturbed graph's metric; unprimed measures
/// are those of the original graph.
pub fn check_orc_bounds(
    g: &Graph,
    cfg: &MeasureConfig,
    trials: usize,
    seed: u64,
) -> Result<BoundCheckReport> {
    require_connected(g)?;
    let before = OllivierContext::new(g, cfg)?;
    let tallies: Vec<Tally> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let p = trial_perturbations(g, seed, t, true);
            let mut tally = Tally::default();
            for (removed, h) in [
                p.added.map(|(_, h)| (None, h)),
                p.deleted.map(|(e, h)| (Some(e), h)),
            ]
            .into_iter()
            .flatten()
            {
                orc_trial(g, &before, &h, removed, cfg, &mut tally)?;
            }
            Ok(tally)
        })
        .collect::<Result<_>>()?;
    Ok(summarise(BoundTheorem::Orc, trials, tallies))
}

fn orc_trial(
    g: &Graph,
    before: &OllivierContext<'_>,
    h: &Graph,
    removed: Option<Edge>,
    cfg: &MeasureConfig,
    tally: &mut Tally,
) -> Result<()> {
    let after = OllivierContext::new(h, cfg)?;
    let d = after.distances();
    let mut w_max: f64 = 0.0;
    for x in 0..g.n() {
        w_max = w_max.max(wasserstein1(before.measure(x)?, after.measure(x)?, d)?);
    }
    tally.note("w_max", Agg::Max, w_max);
    let jumps: Vec<f64> = (0..g.n())
        .map(|v| jump(v, after.measure(v)?, d))
        .collect::<Result<_>>()?;
    for &(i, j) in g.edges() {
        if Some((i, j)) == removed {
            continue;
        }
        let dij = d.get(i, j);
        let k = after.curvature(i, j)?;
        let old_pair = wasserstein1(before.measure(i)?, before.measure(j)?, d)?;
        let lower = 1.0 - (2.0 * w_max + old_pair) / dij;
        let upper = (jumps[i] + jumps[j]) / dij;
        tally.check("lower", k - lower);
        tally.check("upper", upper - k);
        tally.note("jump_max", Agg::Max, jumps[i].max(jumps[j]));
    }
    Ok(())
}

/// Second largest eigenvalue of `D^{-1/2} A D^{-1/2}`.
pub fn normalized_adjacency_lambda2(g: &Graph) -> f64 {
    let n = g.n();
    let scale: Vec<f64> = (0..n)
        .map(|v| {
            let d = g.degree(v) as f64;
            if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 }
        })
        .collect();
    let m = DMatrix::from_fn(n, n, |i, j| {
        if g.has_edge(i, j) { scale[i] * scale[j] } else { 0.0 }
    });
    let mut eig: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    eig.get(1).copied().unwrap_or(0.0)
}

/// `max_{i≠j} R_ij - (1/(d_i+1) + 1/(d_j+1)) / 2`.
pub fn delta_add(g: &Graph, data: &ResistanceData) -> f64 {
    let n = g.n();
    let mut best = f64::NEG_INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            let shift = 0.5 * (1.0 / (g.degree(i) + 1) as f64 + 1.0 / (g.degree(j) + 1) as f64);
            best = best.max(data.resistance(i, j) - shift);
        }
    }
    best
}

/// `2 / (1 - λ_2) - min_{i≠j} R_ij`.
pub fn delta_del(g: &Graph, data: &ResistanceData) -> f64 {
    2.0 / (1.0 - normalized_adjacency_lambda2(g)) - data.min_resistance().unwrap_or(0.0)
}

/// Resistance curvature after one added or deleted edge.
///
/// Addition: `REC <= REC' <= REC + Δ_add (d_i + d_j) / (R_ij - Δ_add)`; the
/// upper bound is vacuous (infinite) when `R_ij <= Δ_add`.
/// Deletion of a non-bridge: `REC - [2/R (2R + Δ_del)(p_i + p_j) -
/// Δ_del (d_i + d_j)] / (R + Δ_del) <= REC' <= REC`.
/// All unprimed quantities come from the original graph.
pub fn check_resistance_bounds(g: &Graph, trials: usize, seed: u64) -> Result<Vec<BoundCheckReport>> {
    require_connected(g)?;
    let data = resistance_data(g);
    let rec = resistance_curvature_with(g, &data);
    let d_add = delta_add(g, &data);
    let lambda2 = normalized_adjacency_lambda2(g);
    let d_del = delta_del(g, &data);

    let outcomes: Vec<(Tally, Tally)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let p = trial_perturbations(g, seed, t, true);
            let mut add = Tally::default();
            let mut del = Tally::default();
            if let Some((_, h)) = &p.added {
                let after = resistance_curvature(h);
                for &((i, j), k) in rec.entries() {
                    let k2 = after.get(i, j).expect("edge survives addition");
                    let r = data.resistance(i, j);
                    let deg = (g.degree(i) + g.degree(j)) as f64;
                    let bound = if r > d_add {
                        d_add * deg / (r - d_add)
                    } else {
                        add.note("vacuous_bounds", Agg::Sum, 1.0);
                        f64::INFINITY
                    };
                    add.check("monotonicity", k2 - k);
                    add.check("bound", k + bound - k2);
                    add.note("max_change", Agg::Max, k2 - k);
                    add.note("min_change", Agg::Min, k2 - k);
                }
            }
            if let Some((e, h)) = &p.deleted {
                let after = resistance_curvature(h);
                for &((i, j), k) in rec.entries() {
                    if (i, j) == *e {
                        continue;
                    }
                    let k2 = after.get(i, j).expect("edge survives deletion");
                    let r = data.resistance(i, j);
                    let ps = data.node_curvature(i) + data.node_curvature(j);
                    let deg = (g.degree(i) + g.degree(j)) as f64;
                    let drop = (2.0 / r * (2.0 * r + d_del) * ps - d_del * deg) / (r + d_del);
                    del.check("monotonicity", k - k2);
                    del.check("bound", k2 - (k - drop));
                    del.note("max_change", Agg::Max, k2 - k);
                    del.note("min_change", Agg::Min, k2 - k);
                }
            }
            (add, del)
        })
        .collect();
    let (add, del): (Vec<_>, Vec<_>) = outcomes.into_iter().unzip();
    let mut add = summarise(BoundTheorem::RecAdd, trials, add);
    add.auxiliaries.insert("delta_add".into(), d_add);
    let mut del = summarise(BoundTheorem::RecDel, trials, del);
    del.auxiliaries.insert("delta_del".into(), d_del);
    del.auxiliaries.insert("lambda2".into(), lambda2);
    Ok(vec![add, del])
}

fn resistance_curvature(g: &Graph) -> crate::curvature::EdgeFunction {
    resistance_curvature_with(g, &resistance_data(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{forman, ollivier_ricci, MeasureConfig};
    use crate::graph::{generate_er, named_graph};
    use approx::assert_abs_diff_eq;

    fn connected_er(n: usize, p: f64, mut seed: u64) -> Graph {
        loop {
            let g = generate_er(n, p, seed).unwrap();
            if g.is_connected() {
                return g;
            }
            seed += 1000;
        }
    }

    #[test]
    fn forman_edge_cases() {
        // Attaching vertex 2 to 1 raises d_1: FRC(0,1) drops by one.
        let k2 = Graph::new(3, [(0, 1)]).unwrap();
        let h = k2.with_edges([(1, 2)]).unwrap();
        assert_eq!(forman_edge(&h, 0, 1) - forman_edge(&k2, 0, 1), -1.0);
        // Closing a triangle on a path: +1 degree, +1 triangle.
        let path = named_graph("path3").unwrap();
        let h = path.with_edges([(0, 2)]).unwrap();
        assert_eq!(forman_edge(&h, 0, 1) - forman_edge(&path, 0, 1), 2.0);
    }

    #[test]
    fn forman_bounds_hold() {
        for s in 0..5 {
            let g = generate_er(12, 0.3, s).unwrap();
            for r in check_forman_bounds(&g, 40, s) {
                assert_eq!(r.violations, 0, "{r:?}");
                assert!(r.worst_margin >= 0.0);
            }
        }
    }

    #[test]
    fn forman_extremes_are_attained() {
        let g = connected_er(12, 0.4, 3);
        let reports = check_forman_bounds(&g, 60, 1);
        let add = &reports[0].auxiliaries;
        assert_eq!(add["max_change"], 2.0);
        assert_eq!(add["min_change"], -1.0);
        assert_eq!(reports[0].worst_margin, 0.0);
    }

    #[test]
    fn orc_upper_bound_without_perturbation() {
        for s in 0..5 {
            let g = connected_er(12, 0.35, s);
            let cfg = MeasureConfig::uniform();
            let ctx = OllivierContext::new(&g, &cfg).unwrap();
            let orc = ollivier_ricci(&g, &cfg).unwrap();
            for &((i, j), k) in orc.entries() {
                let d = ctx.distances();
                let upper = jump(i, ctx.measure(i).unwrap(), d).unwrap()
                    + jump(j, ctx.measure(j).unwrap(), d).unwrap();
                assert!(k <= upper + 1e-12);
                // With no perturbation W'_max = 0 and the lower bound is ORC itself.
                let w = wasserstein1(ctx.measure(i).unwrap(), ctx.measure(j).unwrap(), d).unwrap();
                assert_abs_diff_eq!(1.0 - w, k, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn orc_bounds_hold() {
        let g = connected_er(12, 0.3, 1);
        for cfg in [MeasureConfig::uniform(), MeasureConfig::random_walk(2)] {
            let r = check_orc_bounds(&g, &cfg, 10, 4).unwrap();
            assert_eq!(r.violations, 0, "{r:?}");
            assert!(r.auxiliaries["w_max"] > 0.0);
        }
        assert!(check_orc_bounds(&Graph::new(4, [(0, 1), (2, 3)]).unwrap(), &MeasureConfig::uniform(), 1, 0).is_err());
    }

    #[test]
    fn lambda2_examples() {
        // K_n: eigenvalues 1 and -1/(n-1).
        assert_abs_diff_eq!(normalized_adjacency_lambda2(&named_graph("k4").unwrap()), -1.0 / 3.0, epsilon = 1e-12);
        // C_4 is bipartite with spectrum {1, 0, 0, -1}.
        assert_abs_diff_eq!(normalized_adjacency_lambda2(&named_graph("c4").unwrap()), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn triangle_to_diamond_increases_rec() {
        let k3 = Graph::new(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        let diamond = k3.with_edges([(1, 3)]).unwrap();
        let (a, b) = (resistance_data(&k3), resistance_data(&diamond));
        for &(i, j) in k3.edges() {
            assert!(b.resistance(i, j) <= a.resistance(i, j) + 1e-12);
        }
        // Series resistance: deleting a C4 edge leaves a path with R = 1 per
        // edge and p = 1/2, 0, 0, 1/2 at the ends and middle.
        let c4 = named_graph("c4").unwrap();
        let path = c4.without_edges(&[(0, 3)]);
        let (before, after) = (resistance_curvature(&c4), resistance_curvature(&path));
        for &((i, j), k) in after.entries() {
            assert!(k <= before.get(i, j).unwrap() + 1e-12);
        }
        assert_abs_diff_eq!(after.get(0, 1).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(after.get(1, 2).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rec_addition_can_decrease_curvature() {
        // Path 0-1-2-3 plus chord (0, 2): REC(2, 3) falls from 1 to 2/3.
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let h = g.with_edges([(0, 2)]).unwrap();
        assert_abs_diff_eq!(resistance_curvature(&g).get(2, 3).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(resistance_curvature(&h).get(2, 3).unwrap(), 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn rec_deletion_bound_exceeds_rec_on_k4() {
        // K4: R = 1/2, p = 1/4, REC = 2, λ2 = -1/3, Δ_del = 3/2 - 1/2 = 1.
        // The bracket (2/R)(2R + Δ)(p_i + p_j) - Δ(d_i + d_j) = 4 - 6 < 0,
        // so the claimed lower bound 2 + 4/3 lies above REC itself.
        let k4 = named_graph("k4").unwrap();
        let data = resistance_data(&k4);
        assert_abs_diff_eq!(delta_del(&k4, &data), 1.0, epsilon = 1e-12);
        let reports = check_resistance_bounds(&k4, 5, 0).unwrap();
        assert_eq!(reports[1].auxiliaries["bound_violations"], reports[1].samples as f64 / 2.0);
        assert_abs_diff_eq!(reports[1].worst_margin, -(10.0 / 3.0 - 1.0), epsilon = 1e-9);
    }

    #[test]
    fn reports_are_reproducible() {
        let g = connected_er(10, 0.4, 2);
        assert_eq!(check_resistance_bounds(&g, 20, 3).unwrap(), check_resistance_bounds(&g, 20, 3).unwrap());
        assert_eq!(check_forman_bounds(&g, 20, 3), check_forman_bounds(&g, 20, 3));
        let f = forman(&g);
        assert!(!f.is_empty());
    }
}
