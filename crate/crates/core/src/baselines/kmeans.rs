use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansConfig {
    pub k: usize,
    pub max_iter: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl KMeansConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        KMeansConfig {
            k,
            max_iter: 300,
            restarts: 10,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squares.
    pub wcss: f64,
    pub iterations: usize,
    /// WCSS after each assignment step of the winning restart.
    pub wcss_history: Vec<f64>,
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Lloyd's algorithm from k-means++ seeds, best of `restarts` by WCSS.
///
/// Restart `r` draws from the sub-stream `(seed, r)`. A cluster that empties
/// during Lloyd iterations is re-seeded at the point farthest from its
/// current centroid.
pub fn kmeans(points: &[Vec<f64>], cfg: &KMeansConfig) -> Result<KMeansResult> {
    let n = points.len();
    if cfg.k == 0 || cfg.max_iter == 0 || cfg.restarts == 0 {
        return Err(Error::InvalidParameter("k, max_iter and restarts must be at least 1".into()));
    }
    if n < cfg.k {
        return Err(Error::InvalidParameter(format!("{n} points cannot form {} clusters", cfg.k)));
    }
    let dim = points[0].len();
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("k-means input"));
    }
    let runs: Vec<KMeansResult> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| single_run(points, cfg, r as u64))
        .collect();
    let mut best = None::<KMeansResult>;
    for run in runs {
        if best.as_ref().is_none_or(|b| run.wcss < b.wcss) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn plus_plus(points: &[Vec<f64>], k: usize, rng: &mut rng::StreamRng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut centers = vec![points[rng.random_range(0..n)].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| dist2(p, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut u = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &d) in d2.iter().enumerate() {
                if u < d {
                    chosen = i;
                    break;
                }
                u -= d;
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centers.push(points[pick].clone());
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(dist2(p, centers.last().unwrap()));
        }
    }
    centers
}

fn assign(points: &[Vec<f64>], centers: &[Vec<f64>], labels: &mut [usize], dists: &mut [f64]) -> f64 {
    let mut wcss = 0.0;
    for (i, p) in points.iter().enumerate() {
        let mut best = (0, f64::INFINITY);
        for (c, ctr) in centers.iter().enumerate() {
            let d = dist2(p, ctr);
            if d < best.1 {
                best = (c, d);
            }
        }
        labels[i] = best.0;
        dists[i] = best.1;
        wcss += best.1;
    }
    wcss
}

fn single_run(points: &[Vec<f64>], cfg: &KMeansConfig, restart: u64) -> KMeansResult {
    let n = points.len();
    let dim = points[0].len();
    let k = cfg.k;
    let mut rng = rng::substream(cfg.seed, &[restart]);
    let mut centers = plus_plus(points, k, &mut rng);
    let mut labels = vec![usize::MAX; n];
    let mut next = vec![0; n];
    let mut dists = vec![0.0; n];
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut wcss = assign(points, &centers, &mut next, &mut dists);
    history.push(wcss);
    loop {
        iterations += 1;
        if next == labels || iterations > cfg.max_iter {
            break;
        }
        labels.copy_from_slice(&next);
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &l) in points.iter().zip(&labels) {
            counts[l] += 1;
            for (s, v) in sums[l].iter_mut().zip(p) {
                *s += v;
            }
        }
        let mut taken = vec![false; n];
        for c in 0..k {
            if counts[c] > 0 {
                centers[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            } else {
                let far = (0..n)
                    .filter(|&i| !taken[i])
                    .max_by(|&a, &b| dists[a].total_cmp(&dists[b]).then(b.cmp(&a)))
                    .expect("n ≥ k");
                taken[far] = true;
                centers[c] = points[far].clone();
                dists[far] = 0.0;
            }
        }
        wcss = assign(points, &centers, &mut next, &mut dists);
        history.push(wcss);
    }
    KMeansResult {
        labels: next,
        centroids: centers,
        wcss,
        iterations,
        wcss_history: history,
    }
}
