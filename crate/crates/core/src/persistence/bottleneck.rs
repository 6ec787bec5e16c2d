use std::fmt;

use super::diagram::{Pair, PersistenceDiagram};

/// Bottleneck distance; diagrams with different numbers of essential
/// classes are infinitely far apart and flagged as such.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BottleneckDistance {
    Finite(f64),
    EssentialMismatch,
}

impl BottleneckDistance {
    pub fn value(self) -> f64 {
        match self {
            BottleneckDistance::Finite(x) => x,
            BottleneckDistance::EssentialMismatch => f64::INFINITY,
        }
    }

    pub fn max(self, other: Self) -> Self {
        match (self, other) {
            (BottleneckDistance::Finite(a), BottleneckDistance::Finite(b)) => {
                BottleneckDistance::Finite(a.max(b))
            }
            _ => BottleneckDistance::EssentialMismatch,
        }
    }
}

impl fmt::Display for BottleneckDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BottleneckDistance::Finite(x) => write!(f, "{x}"),
            BottleneckDistance::EssentialMismatch => f.write_str("inf (essential mismatch)"),
        }
    }
}

fn linf(a: Pair, b: Pair) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

/// Bottleneck distance between the dimension-`dim` parts of two diagrams.
pub fn bottleneck(a: &PersistenceDiagram, b: &PersistenceDiagram, dim: usize) -> BottleneckDistance {
    bottleneck_pairs(a.dim(dim), b.dim(dim))
}

/// Maximum of the dimension-0 and dimension-1 bottleneck distances.
pub fn bottleneck_all(a: &PersistenceDiagram, b: &PersistenceDiagram) -> BottleneckDistance {
    bottleneck(a, b, 0).max(bottleneck(a, b, 1))
}

pub fn bottleneck_pairs(a: &[Pair], b: &[Pair]) -> BottleneckDistance {
    let split = |ps: &[Pair]| {
        let mut essential: Vec<f64> = ps.iter().filter(|p| p.1.is_infinite()).map(|p| p.0).collect();
        essential.sort_by(f64::total_cmp);
        // Points on the diagonal match the diagonal for free.
        let finite: Vec<Pair> = ps
            .iter()
            .copied()
            .filter(|p| p.1.is_finite() && p.1 > p.0)
            .collect();
        (essential, finite)
    };
    let (ea, fa) = split(a);
    let (eb, fb) = split(b);
    if ea.len() != eb.len() {
        return BottleneckDistance::EssentialMismatch;
    }
    // Matching sorted births is optimal for the max cost on a line.
    let essential = ea
        .iter()
        .zip(&eb)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    BottleneckDistance::Finite(essential.max(finite_bottleneck(&fa, &fb)))
}

// Rows: points of `a`, then diagonal slots for points of `b`.
// Columns: points of `b`, then diagonal slots for points of `a`.
struct Matching<'p> {
    a: &'p [Pair],
    b: &'p [Pair],
}

impl Matching<'_> {
    fn size(&self) -> usize {
        self.a.len() + self.b.len()
    }

    fn cost(&self, row: usize, col: usize) -> f64 {
        let (n, m) = (self.a.len(), self.b.len());
        match (row < n, col < m) {
            (true, true) => linf(self.a[row], self.b[col]),
            (true, false) => {
                if col - m == row {
                    half_persistence(self.a[row])
                } else {
                    f64::INFINITY
                }
            }
            (false, true) => {
                if row - n == col {
                    half_persistence(self.b[col])
                } else {
                    f64::INFINITY
                }
            }
            (false, false) => 0.0,
        }
    }

    fn perfect_within(&self, radius: f64) -> bool {
        let size = self.size();
        let adj: Vec<Vec<usize>> = (0..size)
            .map(|r| (0..size).filter(|&c| self.cost(r, c) <= radius).collect())
            .collect();
        let mut match_col = vec![usize::MAX; size];
        for r in 0..size {
            let mut seen = vec![false; size];
            if !augment(r, &adj, &mut match_col, &mut seen) {
                return false;
            }
        }
        true
    }
}

fn half_persistence(p: Pair) -> f64 {
    (p.1 - p.0) / 2.0
}

fn augment(r: usize, adj: &[Vec<usize>], match_col: &mut [usize], seen: &mut [bool]) -> bool {
    for &c in &adj[r] {
        if seen[c] {
            continue;
        }
        seen[c] = true;
        if match_col[c] == usize::MAX || augment(match_col[c], adj, match_col, seen) {
            match_col[c] = r;
            return true;
        }
    }
    false
}

/// Exact bottleneck distance between finite point sets with diagonal
/// augmentation: the smallest candidate cost admitting a perfect matching.
fn finite_bottleneck(a: &[Pair], b: &[Pair]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let mut candidates: Vec<f64> = a.iter().chain(b).map(|&p| half_persistence(p)).collect();
    for &p in a {
        for &q in b {
            candidates.push(linf(p, q));
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let m = Matching { a, b };
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if m.perfect_within(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}
