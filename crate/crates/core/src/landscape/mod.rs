//! Persistence landscapes sampled on a regular grid, their averages, norms
//! and distances, and the set-to-set distance pipeline built on them.

mod pipeline;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::persistence::{Pair, PersistenceDiagram};
use crate::report::{json_float, json_floats};

pub use pipeline::{
    distance_between_groups, pairwise_landscape_distances, prepare_landscapes, set_distance, DistanceReport, PipelineConfig,
    PreparedLandscapes,
};

pub const DEFAULT_RESOLUTION: usize = 1000;
pub const DEFAULT_MAX_DEPTH: usize = 64;
/// Homology dimensions carried by every landscape.
pub const DIMENSIONS: usize = 2;

/// Regular sampling grid `lo = t_0 < … < t_{res-1} = hi`.
///
/// `hi` doubles as the stand-in death value for essential classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandscapeGrid {
    pub lo: f64,
    pub hi: f64,
    pub resolution: usize,
}

impl LandscapeGrid {
    pub fn new(lo: f64, hi: f64, resolution: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Domain(format!("invalid grid range [{lo}, {hi}]")));
        }
        if resolution < 2 {
            return Err(Error::Domain("grid resolution must be at least 2".into()));
        }
        Ok(LandscapeGrid { lo, hi, resolution })
    }

    /// Grid spanning finite values in `[min, max]`, extended above `max` by
    /// `cap_padding` (default `max(1, max - min)`) to make room for the
    /// capped essential classes.
    pub fn covering(min: f64, max: f64, resolution: usize, cap_padding: Option<f64>) -> Result<Self> {
        let padding = cap_padding.unwrap_or_else(|| (max - min).max(1.0));
        if padding.is_nan() || padding <= 0.0 {
            return Err(Error::Domain(format!("cap padding {padding} must be positive")));
        }
        Self::new(min, max + padding, resolution)
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.resolution - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.resolution {
            self.hi
        } else {
            self.lo + i as f64 * self.step()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.resolution).map(|i| self.point(i))
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// Smallest grid containing both.
    pub fn union(&self, other: &Self) -> Self {
        LandscapeGrid {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
            resolution: self.resolution.max(other.resolution),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Norm {
    #[serde(rename = "1")]
    L1,
    #[serde(rename = "2")]
    L2,
    #[serde(rename = "sup")]
    Sup,
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::L1 => "1",
            Norm::L2 => "2",
            Norm::Sup => "sup",
        })
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" | "l1" => Ok(Norm::L1),
            "2" | "l2" => Ok(Norm::L2),
            "sup" | "inf" | "max" => Ok(Norm::Sup),
            _ => Err(Error::Domain(format!("unknown norm `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMode {
    /// Norm of the pointwise difference of the landscapes.
    NormOfDiff,
    /// Euclidean norm of the per-dimension differences of sup-norms.
    Alg2,
}

impl fmt::Display for DistanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceMode::NormOfDiff => "norm_of_diff",
            DistanceMode::Alg2 => "alg2",
        })
    }
}

impl FromStr for DistanceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "norm_of_diff" | "diff" => Ok(DistanceMode::NormOfDiff),
            "alg2" | "sup_diff" => Ok(DistanceMode::Alg2),
            _ => Err(Error::Domain(format!("unknown distance mode `{s}`"))),
        }
    }
}

/// Per homology dimension, the functions `λ_1 ≥ λ_2 ≥ … ≥ 0` sampled on
/// `grid`. `levels[k][j][i]` is `λ_{j+1}` of dimension `k` at grid point `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceLandscape {
    grid: LandscapeGrid,
    levels: [Vec<Vec<f64>>; DIMENSIONS],
}

impl PersistenceLandscape {
    pub fn zero(grid: LandscapeGrid) -> Self {
        PersistenceLandscape {
            grid,
            levels: Default::default(),
        }
    }

    pub fn grid(&self) -> &LandscapeGrid {
        &self.grid
    }

    pub fn levels(&self, dim: usize) -> &[Vec<f64>] {
        &self.levels[dim]
    }

    pub fn depth(&self, dim: usize) -> usize {
        self.levels[dim].len()
    }

    /// Largest value of any function of dimension `dim`.
    pub fn sup(&self, dim: usize) -> f64 {
        // λ_1 dominates every deeper level.
        self.levels[dim]
            .first()
            .map_or(0.0, |l| l.iter().copied().fold(0.0, f64::max))
    }

    /// Linear interpolation onto `grid`, zero outside the current range.
    pub fn resample(&self, grid: &LandscapeGrid) -> Self {
        if grid == &self.grid {
            return self.clone();
        }
        let src = self.grid;
        let sample = |f: &[f64], t: f64| {
            if t < src.lo || t > src.hi {
                return 0.0;
            }
            let x = (t - src.lo) / src.step();
            let i = (x.floor() as usize).min(src.resolution - 2);
            let w = (x - i as f64).clamp(0.0, 1.0);
            f[i] * (1.0 - w) + f[i + 1] * w
        };
        let levels = self.levels.clone().map(|dim| {
            dim.iter()
                .map(|f| grid.points().map(|t| sample(f, t)).collect())
                .collect()
        });
        PersistenceLandscape {
            grid: *grid,
            levels,
        }
    }

    /// `[{dim, grid:{lo,hi,res}, functions:[[…],…]}, …]`
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..DIMENSIONS)
                .map(|k| {
                    json!({
                        "dim": k,
                        "grid": {
                            "lo": json_float(self.grid.lo),
                            "hi": json_float(self.grid.hi),
                            "res": self.grid.resolution,
                        },
                        "functions": self.levels[k].iter().map(|f| json_floats(f)).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }
}

fn tent(b: f64, d: f64, t: f64) -> f64 {
    (t - b).min(d - t).max(0.0)
}

fn landscape_levels(pairs: &[Pair], grid: &LandscapeGrid, max_depth: usize) -> Vec<Vec<f64>> {
    let capped: Vec<Pair> = pairs
        .iter()
        .map(|&(b, d)| (b, if d.is_finite() { d } else { grid.hi }))
        .filter(|&(b, d)| d > b)
        .collect();
    let depth = capped.len().min(max_depth);
    let mut levels = vec![vec![0.0; grid.resolution]; depth];
    let mut values = Vec::with_capacity(capped.len());
    for (i, t) in grid.points().enumerate() {
        values.clear();
        values.extend(
            capped
                .iter()
                .map(|&(b, d)| tent(b, d, t))
                .filter(|&v| v > 0.0),
        );
        values.sort_by(|a, b| b.total_cmp(a));
        for (j, &v) in values.iter().take(depth).enumerate() {
            levels[j][i] = v;
        }
    }
    levels
}

/// Landscape of a diagram; essential classes die at `grid.hi`.
pub fn to_landscape(d: &PersistenceDiagram, grid: &LandscapeGrid) -> Result<PersistenceLandscape> {
    to_landscape_with_depth(d, grid, DEFAULT_MAX_DEPTH)
}

pub fn to_landscape_with_depth(
    d: &PersistenceDiagram,
    grid: &LandscapeGrid,
    max_depth: usize,
) -> Result<PersistenceLandscape> {
    if let (Some(lo), Some(hi)) = (d.min_finite(), d.max_finite()) {
        if !grid.contains(lo) || !grid.contains(hi) {
            return Err(Error::Domain(format!(
                "grid [{}, {}] does not cover diagram values [{lo}, {hi}]",
                grid.lo, grid.hi
            )));
        }
    }
    Ok(PersistenceLandscape {
        grid: *grid,
        levels: [
            landscape_levels(&d.dim0, grid, max_depth),
            landscape_levels(&d.dim1, grid, max_depth),
        ],
    })
}

/// Pointwise mean, with missing levels treated as zero functions.
///
/// Inputs on different grids are first resampled onto the union grid.
/// Summation runs in input order.
pub fn average(ls: &[PersistenceLandscape]) -> Result<PersistenceLandscape> {
    average_refs(&ls.iter().collect::<Vec<_>>())
}

pub(crate) fn average_refs(ls: &[&PersistenceLandscape]) -> Result<PersistenceLandscape> {
    let first = ls.first().ok_or(Error::Empty("landscape list"))?;
    let grid = ls.iter().fold(first.grid, |g, l| g.union(&l.grid));
    let resampled: Vec<std::borrow::Cow<'_, PersistenceLandscape>> = ls
        .iter()
        .map(|l| {
            if l.grid == grid {
                std::borrow::Cow::Borrowed(*l)
            } else {
                std::borrow::Cow::Owned(l.resample(&grid))
            }
        })
        .collect();
    let scale = 1.0 / ls.len() as f64;
    let mut levels: [Vec<Vec<f64>>; DIMENSIONS] = Default::default();
    for k in 0..DIMENSIONS {
        let depth = resampled.iter().map(|l| l.depth(k)).max().unwrap_or(0);
        let mut acc = vec![vec![0.0; grid.resolution]; depth];
        for l in &resampled {
            for (j, f) in l.levels[k].iter().enumerate() {
                for (a, x) in acc[j].iter_mut().zip(f) {
                    *a += x;
                }
            }
        }
        for f in &mut acc {
            for a in f.iter_mut() {
                *a *= scale;
            }
        }
        levels[k] = acc;
    }
    Ok(PersistenceLandscape { grid, levels })
}

fn function_norm(f: &[f64], step: f64, p: Norm) -> f64 {
    let trapezoid = |pow: fn(f64) -> f64| {
        let n = f.len();
        let inner: f64 = f.iter().map(|&x| pow(x.abs())).sum();
        step * (inner - 0.5 * (pow(f[0].abs()) + pow(f[n - 1].abs())))
    };
    match p {
        Norm::Sup => f.iter().fold(0.0, |m, x| m.max(x.abs())),
        Norm::L1 => trapezoid(|x| x),
        Norm::L2 => trapezoid(|x| x * x),
    }
}

/// `(Σ_k Σ_j ∫ |λ_{k,j}|^p)^{1/p}` by the trapezoidal rule, or the largest
/// sampled absolute value for the sup norm.
pub fn landscape_norm(l: &PersistenceLandscape, p: Norm) -> f64 {
    let step = l.grid.step();
    let parts = l.levels.iter().flatten().map(|f| function_norm(f, step, p));
    match p {
        Norm::Sup => parts.fold(0.0, f64::max),
        Norm::L1 => parts.sum(),
        Norm::L2 => parts.sum::<f64>().sqrt(),
    }
}

fn difference(a: &PersistenceLandscape, b: &PersistenceLandscape) -> PersistenceLandscape {
    let levels = std::array::from_fn(|k| {
        let depth = a.depth(k).max(b.depth(k));
        (0..depth)
            .map(|j| {
                let fa = a.levels[k].get(j);
                let fb = b.levels[k].get(j);
                (0..a.grid.resolution)
                    .map(|i| fa.map_or(0.0, |f| f[i]) - fb.map_or(0.0, |f| f[i]))
                    .collect()
            })
            .collect()
    });
    PersistenceLandscape {
        grid: a.grid,
        levels,
    }
}

pub fn landscape_distance(
    a: &PersistenceLandscape,
    b: &PersistenceLandscape,
    p: Norm,
    mode: DistanceMode,
) -> f64 {
    let (a, b) = if a.grid == b.grid {
        (std::borrow::Cow::Borrowed(a), std::borrow::Cow::Borrowed(b))
    } else {
        let grid = a.grid.union(&b.grid);
        (
            std::borrow::Cow::Owned(a.resample(&grid)),
            std::borrow::Cow::Owned(b.resample(&grid)),
        )
    };
    match mode {
        DistanceMode::NormOfDiff => landscape_norm(&difference(&a, &b), p),
        DistanceMode::Alg2 => (0..DIMENSIONS)
            .map(|k| (a.sup(k) - b.sup(k)).powi(2))
            .sum::<f64>()
            .sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const INF: f64 = f64::INFINITY;

    fn grid(lo: f64, hi: f64, res: usize) -> LandscapeGrid {
        LandscapeGrid::new(lo, hi, res).unwrap()
    }

    fn tent_landscape() -> PersistenceLandscape {
        let d = PersistenceDiagram::new(vec![(0.0, 2.0)], vec![]);
        to_landscape(&d, &grid(0.0, 2.0, 1001)).unwrap()
    }

    #[test]
    fn single_tent() {
        let l = tent_landscape();
        let f = &l.levels(0)[0];
        assert_eq!(f[0], 0.0);
        assert_eq!(f[1000], 0.0);
        assert_abs_diff_eq!(f[500], 1.0, epsilon = 1e-12);
        assert_eq!(landscape_norm(&l, Norm::Sup), 1.0);
        // Triangle of base 2 and height 1.
        assert_abs_diff_eq!(landscape_norm(&l, Norm::L1), 1.0, epsilon = 1e-3);
        // ∫ tent² = 2/3.
        assert_abs_diff_eq!(landscape_norm(&l, Norm::L2), (2.0f64 / 3.0).sqrt(), epsilon = 1e-3);
    }

    #[test]
    fn empty_and_duplicate_diagrams() {
        let g = grid(0.0, 2.0, 101);
        let empty = to_landscape(&PersistenceDiagram::default(), &g).unwrap();
        assert_eq!(landscape_norm(&empty, Norm::Sup), 0.0);
        assert_eq!(landscape_norm(&empty, Norm::L1), 0.0);
        let dup = PersistenceDiagram::new(vec![(0.0, 2.0), (0.0, 2.0)], vec![]);
        let l = to_landscape(&dup, &g).unwrap();
        assert_eq!(l.levels(0)[0], l.levels(0)[1]);
        let single = to_landscape(&PersistenceDiagram::new(vec![(0.0, 2.0)], vec![]), &g).unwrap();
        assert_eq!(l.levels(0)[0], single.levels(0)[0]);
    }

    #[test]
    fn essential_classes_are_capped() {
        let g = LandscapeGrid::covering(0.0, 1.0, 301, None).unwrap();
        assert_eq!(g.hi, 2.0);
        let d = PersistenceDiagram::new(vec![(0.0, INF)], vec![(1.0, INF)]);
        let l = to_landscape(&d, &g).unwrap();
        assert_abs_diff_eq!(l.sup(0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(l.sup(1), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn grid_must_cover_diagram() {
        let d = PersistenceDiagram::new(vec![(0.0, 5.0)], vec![]);
        assert!(to_landscape(&d, &grid(0.0, 2.0, 10)).is_err());
        assert!(LandscapeGrid::new(1.0, 1.0, 10).is_err());
        assert!(LandscapeGrid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn averaging() {
        let l = tent_landscape();
        assert_eq!(average(std::slice::from_ref(&l)).unwrap(), l);
        assert_eq!(average(&[l.clone(), l.clone()]).unwrap(), l);
        let zero = PersistenceLandscape::zero(*l.grid());
        let half = average(&[l.clone(), zero]).unwrap();
        for (a, b) in half.levels(0)[0].iter().zip(&l.levels(0)[0]) {
            assert_eq!(*a, b / 2.0);
        }
        assert!(average(&[]).is_err());
    }

    #[test]
    fn distances() {
        let l = tent_landscape();
        let zero = PersistenceLandscape::zero(*l.grid());
        for mode in [DistanceMode::NormOfDiff, DistanceMode::Alg2] {
            assert_eq!(landscape_distance(&l, &l, Norm::Sup, mode), 0.0);
        }
        assert_eq!(landscape_distance(&l, &zero, Norm::Sup, DistanceMode::NormOfDiff), 1.0);
        assert_eq!(landscape_distance(&l, &zero, Norm::Sup, DistanceMode::Alg2), 1.0);
    }

    #[test]
    fn resampling_onto_wider_grid() {
        let l = tent_landscape();
        let wide = l.resample(&grid(-2.0, 4.0, 3001));
        assert_abs_diff_eq!(wide.sup(0), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(landscape_norm(&wide, Norm::L1), 1.0, epsilon = 1e-3);
    }

    fn arb_diagram() -> impl Strategy<Value = PersistenceDiagram> {
        let pair = (0.0f64..5.0, 0.0f64..3.0).prop_map(|(b, l)| (b, b + l));
        (
            prop::collection::vec(pair, 0..8),
            prop::collection::vec(0.0f64..5.0, 0..3),
        )
            .prop_map(|(mut d0, ess)| {
                d0.extend(ess.iter().map(|&b| (b, INF)));
                PersistenceDiagram::new(d0, vec![])
            })
    }

    proptest! {
        #[test]
        fn levels_are_ordered(d in arb_diagram()) {
            let l = to_landscape(&d, &grid(0.0, 10.0, 200)).unwrap();
            for k in 0..DIMENSIONS {
                for w in l.levels(k).windows(2) {
                    for (a, b) in w[0].iter().zip(&w[1]) {
                        prop_assert!(a >= b && *b >= 0.0);
                    }
                }
            }
        }

        #[test]
        fn sup_distance_is_one_lipschitz(d in arb_diagram(), eps in 0.0f64..0.2, seed: u64) {
            use rand::{Rng, SeedableRng};
            let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut jitter = |x: f64| if x.is_finite() { x + r.random_range(-eps..=eps) } else { x };
            let moved = PersistenceDiagram::new(
                d.dim0.iter().map(|&(b, dd)| {
                    let nb = jitter(b);
                    let nd = jitter(dd);
                    (nb, nd.max(nb))
                }).collect(),
                vec![],
            );
            let g = grid(-1.0, 10.0, 500);
            let a = to_landscape(&d, &g).unwrap();
            let b = to_landscape(&moved, &g).unwrap();
            prop_assert!(landscape_distance(&a, &b, Norm::Sup, DistanceMode::NormOfDiff) <= eps + 1e-9);
        }

        #[test]
        fn distance_is_a_pseudometric(x in arb_diagram(), y in arb_diagram(), z in arb_diagram(), pi in 0usize..3) {
            let p = [Norm::L1, Norm::L2, Norm::Sup][pi];
            let g = grid(0.0, 10.0, 300);
            let [a, b, c] = [&x, &y, &z].map(|d| to_landscape(d, &g).unwrap());
            let d = |u: &PersistenceLandscape, v: &PersistenceLandscape| {
                landscape_distance(u, v, p, DistanceMode::NormOfDiff)
            };
            prop_assert_eq!(d(&a, &b), d(&b, &a));
            let scale = 1.0 + d(&a, &b) + d(&b, &c);
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-9 * scale);
        }

        #[test]
        fn average_is_order_invariant(ds in prop::collection::vec(arb_diagram(), 1..5)) {
            let g = grid(0.0, 10.0, 100);
            let ls: Vec<_> = ds.iter().map(|d| to_landscape(d, &g).unwrap()).collect();
            let mut rev = ls.clone();
            rev.reverse();
            let (a, b) = (average(&ls).unwrap(), average(&rev).unwrap());
            prop_assert!(landscape_distance(&a, &b, Norm::Sup, DistanceMode::NormOfDiff) < 1e-12);
        }

        #[test]
        fn quadrature_converges(d in arb_diagram()) {
            let coarse = to_landscape(&d, &grid(0.0, 10.0, 1000)).unwrap();
            let fine = to_landscape(&d, &grid(0.0, 10.0, 2000)).unwrap();
            // Levels are piecewise linear with slopes in {-1, 0, 1}. The trapezoid
            // rule is exact for |f| away from kinks and loses at most h^2 / 4 per
            // kink; |f|^2 also loses h^2 / 6 per unit length. A diagram with m
            // pairs has at most m^2 + 3m kinks across all levels.
            let h = coarse.grid.step();
            let m = (d.dim0.len() + d.dim1.len()) as f64;
            let kinks = m * m + 3.0 * m;
            let peak = landscape_norm(&fine, Norm::Sup);
            let length = 10.0 * m;
            let l1 = [landscape_norm(&coarse, Norm::L1), landscape_norm(&fine, Norm::L1)];
            prop_assert!((l1[0] - l1[1]).abs() <= 2.0 * kinks * h * h / 4.0 + 1e-9, "{l1:?}");
            let sq = [&coarse, &fine].map(|l| landscape_norm(l, Norm::L2).powi(2));
            let tol = 2.0 * (kinks * peak * h * h / 2.0 + length * h * h / 6.0) + 1e-9;
            prop_assert!((sq[0] - sq[1]).abs() <= tol, "{sq:?}");
        }
    }
}
