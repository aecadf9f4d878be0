//! Lloyd's k-means with k-means++ seeding and restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::features::FeatureMatrix;
use crate::error::{OtsError, Result};

pub const DEFAULT_RESTARTS: usize = 10;
pub const DEFAULT_MAX_ITERATIONS: usize = 300;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KMeansResult {
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squares.
    pub inertia: f64,
    /// Restart (0-based) that produced the result.
    pub restart: usize,
    pub iterations: usize,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let d = sq_dist(point, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn plus_plus(rows: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let m = rows.len();
    let mut centroids = vec![rows[rng.random_range(0..m)].clone()];
    let mut d2: Vec<f64> = rows.iter().map(|r| sq_dist(r, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = m - 1;
            for (i, &w) in d2.iter().enumerate() {
                if target < w {
                    chosen = i;
                    break;
                }
                target -= w;
            }
            chosen
        } else {
            rng.random_range(0..m)
        };
        centroids.push(rows[pick].clone());
        for (i, r) in rows.iter().enumerate() {
            d2[i] = d2[i].min(sq_dist(r, &centroids[centroids.len() - 1]));
        }
    }
    centroids
}

fn lloyd(
    rows: &[Vec<f64>],
    mut centroids: Vec<Vec<f64>>,
    max_iter: usize,
) -> (Vec<usize>, Vec<Vec<f64>>, f64, usize) {
    let m = rows.len();
    let k = centroids.len();
    let dim = rows[0].len();
    let mut labels = vec![usize::MAX; m];
    let mut iterations = 0;
    for _ in 0..max_iter {
        iterations += 1;
        let mut changed = false;
        for (i, r) in rows.iter().enumerate() {
            let (c, _) = nearest(r, &centroids);
            if labels[i] != c {
                labels[i] = c;
                changed = true;
            }
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (r, &l) in rows.iter().zip(&labels) {
            counts[l] += 1;
            for (s, v) in sums[l].iter_mut().zip(r) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                // move the empty centroid onto the point farthest from its own centroid
                let far = (0..m)
                    .map(|i| (i, sq_dist(&rows[i], &centroids[labels[i]])))
                    .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc })
                    .0;
                let old = labels[far];
                counts[old] -= 1;
                for (s, v) in sums[old].iter_mut().zip(&rows[far]) {
                    *s -= v;
                }
                labels[far] = c;
                counts[c] = 1;
                sums[c] = rows[far].clone();
                changed = true;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
        if !changed {
            break;
        }
    }
    let inertia = rows
        .iter()
        .zip(&labels)
        .map(|(r, &l)| sq_dist(r, &centroids[l]))
        .sum();
    (labels, centroids, inertia, iterations)
}

/// Clusters the rows of `features` into `k` groups.
///
/// Restart `r` seeds its own ChaCha stream from `seed`; the restart with the
/// smallest inertia wins, the earliest on ties.
pub fn kmeans_cluster(features: &FeatureMatrix, k: usize, seed: u64) -> Result<KMeansResult> {
    kmeans_cluster_with(features, k, seed, DEFAULT_RESTARTS, DEFAULT_MAX_ITERATIONS)
}

pub fn kmeans_cluster_with(
    features: &FeatureMatrix,
    k: usize,
    seed: u64,
    restarts: usize,
    max_iterations: usize,
) -> Result<KMeansResult> {
    let rows = features.rows();
    let m = rows.len();
    if k == 0 || k > m {
        return Err(OtsError::InvalidParameter(format!(
            "number of clusters {k} must lie in 1..={m}"
        )));
    }
    if restarts == 0 || max_iterations == 0 {
        return Err(OtsError::InvalidParameter(
            "restarts and iterations must be positive".into(),
        ));
    }
    let mut best: Option<KMeansResult> = None;
    for restart in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(restart as u64);
        let init = plus_plus(rows, k, &mut rng);
        let (labels, centroids, inertia, iterations) = lloyd(rows, init, max_iterations);
        if best.as_ref().is_none_or(|b| inertia < b.inertia) {
            best = Some(KMeansResult {
                labels,
                centroids,
                inertia,
                restart,
                iterations,
            });
        }
    }
    Ok(best.expect("at least one restart"))
}
