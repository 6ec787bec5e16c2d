use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic RNG for the `stream`-th independent unit of work under `seed`.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {p} is not a probability")))
    }
}

// Visits pairs (i, j), i < j, in lexicographic order and keeps each with
// probability `prob(i, j)`. One uniform draw per pair.
fn bernoulli_pairs(
    n: usize,
    r: &mut impl Rng,
    mut prob: impl FnMut(usize, usize) -> f64,
) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let x: f64 = r.random();
            if x < prob(i, j) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_sorted(n, edges)
}

/// Erdős–Rényi graph G(n, p).
pub fn generate_er(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    check_probability("p", p)?;
    Ok(bernoulli_pairs(n, &mut rng(seed), |_, _| p))
}

/// The four graphons used for the separation experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Graphon {
    W1,
    W2,
    W3,
    W4,
}

impl Graphon {
    pub const ALL: [Graphon; 4] = [Graphon::W1, Graphon::W2, Graphon::W3, Graphon::W4];

    pub fn eval(self, u: f64, v: f64) -> f64 {
        match self {
            Graphon::W1 => u * v,
            Graphon::W2 => (-u.max(v).powf(0.75)).exp(),
            Graphon::W3 => (-0.5 * (u.min(v) + u.sqrt() + v.sqrt())).exp(),
            Graphon::W4 => (u - v).abs(),
        }
    }
}

impl fmt::Display for Graphon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Graphon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "W1" => Ok(Graphon::W1),
            "W2" => Ok(Graphon::W2),
            "W3" => Ok(Graphon::W3),
            "W4" => Ok(Graphon::W4),
            _ => Err(Error::Domain(format!("unknown graphon `{s}`"))),
        }
    }
}

/// Samples an `n`-vertex graph from a graphon with i.i.d. uniform latents.
pub fn sample_graphon(which: Graphon, n: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let mut r = rng(seed);
    let latents: Vec<f64> = (0..n).map(|_| r.random()).collect();
    Ok(bernoulli_pairs(n, &mut r, |i, j| {
        which.eval(latents[i], latents[j])
    }))
}

/// Samples from a graphon with caller-supplied latent positions.
pub fn sample_graphon_with_latents(which: Graphon, latents: &[f64], seed: u64) -> Result<Graph> {
    if let Some(&bad) = latents.iter().find(|u| !(0.0..=1.0).contains(*u)) {
        return Err(Error::Domain(format!("latent {bad} outside [0, 1]")));
    }
    Ok(bernoulli_pairs(latents.len(), &mut rng(seed), |i, j| {
        which.eval(latents[i], latents[j])
    }))
}

/// `count` graphon samples whose vertex counts are drawn uniformly from `sizes`.
pub fn sample_graphon_set(
    which: Graphon,
    count: usize,
    sizes: RangeInclusive<usize>,
    seed: u64,
) -> Result<Vec<Graph>> {
    if sizes.is_empty() || *sizes.start() == 0 {
        return Err(Error::Domain(format!("invalid size range {sizes:?}")));
    }
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.random_range(sizes.clone());
            let s: u64 = r.random();
            sample_graphon(which, n, s)
        })
        .collect()
}

/// Seed of the `index`-th graph of a seeded collection.
pub fn member_seed(seed: u64, index: u64) -> u64 {
    stream_rng(seed, index).random()
}

/// `count` independent samples of `sample`, the `k`-th drawn with
/// [`member_seed`]`(seed, k)`.
pub fn sample_set(
    count: usize,
    seed: u64,
    sample: impl Fn(u64) -> Result<Graph>,
) -> Result<Vec<Graph>> {
    (0..count as u64).map(|k| sample(member_seed(seed, k))).collect()
}

pub const COMMUNITY_INTRA: f64 = 0.7;
pub const COMMUNITY_INTER: f64 = 0.05;

/// Two-block community graph: vertices `0..n/2` and `n/2..n`.
pub fn generate_community(n: usize, seed: u64) -> Result<Graph> {
    generate_community_with(n, COMMUNITY_INTRA, COMMUNITY_INTER, seed)
}

pub fn generate_community_with(n: usize, intra: f64, inter: f64, seed: u64) -> Result<Graph> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "community graphs need an even n >= 4, got {n}"
        )));
    }
    check_probability("intra", intra)?;
    check_probability("inter", inter)?;
    let half = n / 2;
    Ok(bernoulli_pairs(n, &mut rng(seed), |i, j| {
        if (i < half) == (j < half) {
            intra
        } else {
            inter
        }
    }))
}
