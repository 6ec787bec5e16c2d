use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::stream_rng;

pub const KMEANS_MAX_ITERATIONS: usize = 100;

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

fn check_square(dist: &[Vec<f64>]) -> Result<usize> {
    let n = dist.len();
    for row in dist {
        if row.len() != n {
            return Err(Error::LengthMismatch(row.len(), n));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if (dist[i][j] - dist[j][i]).abs() > 1e-12 || !dist[i][j].is_finite() {
                return Err(Error::Domain("distance matrix must be finite and symmetric".into()));
            }
        }
    }
    Ok(n)
}

/// Spectral clustering of a distance matrix into `k` groups.
///
/// Gaussian affinity `exp(-d² / 2σ²)` with `σ` the median off-diagonal
/// distance, symmetric normalisation `D^{-1/2} A D^{-1/2}`, the `k` leading
/// eigenvectors with rows scaled to unit length, then k-means. Labels are
/// numbered in order of first appearance.
pub fn spectral_cluster(dist: &[Vec<f64>], k: usize, seed: u64) -> Result<Vec<usize>> {
    let n = check_square(dist)?;
    if k == 0 || k > n {
        return Err(Error::Domain(format!("cannot form {k} clusters from {n} points")));
    }
    if k == n {
        return Ok((0..n).collect());
    }
    let off: Vec<f64> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .map(|(i, j)| dist[i][j])
        .collect();
    let sigma = median(off);
    let affinity = DMatrix::from_fn(n, n, |i, j| {
        let d = dist[i][j];
        if sigma > 0.0 {
            (-d * d / (2.0 * sigma * sigma)).exp()
        } else if d == 0.0 {
            1.0
        } else {
            0.0
        }
    });
    let inv_sqrt_deg: Vec<f64> = (0..n)
        .map(|i| 1.0 / affinity.row(i).sum().sqrt())
        .collect();
    let normalised = DMatrix::from_fn(n, n, |i, j| affinity[(i, j)] * inv_sqrt_deg[i] * inv_sqrt_deg[j]);
    let eig = SymmetricEigen::new(normalised);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let points: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let row: Vec<f64> = order[..k].iter().map(|&c| eig.eigenvectors[(i, c)]).collect();
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                row.iter().map(|x| x / norm).collect()
            } else {
                row
            }
        })
        .collect();
    Ok(kmeans(&points, k, seed))
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

fn nearest(p: &[f64], centers: &[Vec<f64>]) -> usize {
    let mut best = 0;
    for (c, center) in centers.iter().enumerate().skip(1) {
        if sq_dist(p, center) < sq_dist(p, &centers[best]) {
            best = c;
        }
    }
    best
}

/// Lloyd's k-means with farthest-point initialisation from a seeded first
/// center. An empty cluster keeps its previous center.
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64) -> Vec<usize> {
    let n = points.len();
    let first = stream_rng(seed, 0).random_range(0..n);
    let mut centers = vec![points[first].clone()];
    while centers.len() < k {
        let far = (0..n)
            .map(|i| (i, centers.iter().map(|c| sq_dist(&points[i], c)).fold(f64::INFINITY, f64::min)))
            .fold((0, f64::NEG_INFINITY), |best, x| if x.1 > best.1 { x } else { best });
        centers.push(points[far.0].clone());
    }
    let mut labels: Vec<usize> = points.iter().map(|p| nearest(p, &centers)).collect();
    for _ in 0..KMEANS_MAX_ITERATIONS {
        for (c, center) in centers.iter_mut().enumerate() {
            let members: Vec<&Vec<f64>> = (0..n).filter(|&i| labels[i] == c).map(|i| &points[i]).collect();
            if members.is_empty() {
                continue;
            }
            for (d, x) in center.iter_mut().enumerate() {
                *x = members.iter().map(|p| p[d]).sum::<f64>() / members.len() as f64;
            }
        }
        let next: Vec<usize> = points.iter().map(|p| nearest(p, &centers)).collect();
        if next == labels {
            break;
        }
        labels = next;
    }
    canonical(&labels)
}

fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut map = BTreeMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect()
}

fn choose2(x: usize) -> f64 {
    (x * x.saturating_sub(1)) as f64 / 2.0
}

/// Adjusted Rand index of two labelings of the same points.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.len() < 2 {
        return Err(Error::Domain("adjusted Rand index needs at least two points".into()));
    }
    let mut table: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut rows: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cols: BTreeMap<usize, usize> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = table.values().map(|&c| choose2(c)).sum();
    let sa: f64 = rows.values().map(|&c| choose2(c)).sum();
    let sb: f64 = cols.values().map(|&c| choose2(c)).sum();
    let expected = sa * sb / choose2(a.len());
    let max = 0.5 * (sa + sb);
    if max == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}
