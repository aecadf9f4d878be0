//! k-medoids clustering by BUILD and SWAP.

use serde::Serialize;

use super::distance::DistanceMatrix;
use crate::error::{OtsError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PamResult {
    /// Cluster of each object; cluster `c` is represented by `medoids[c]`.
    pub labels: Vec<usize>,
    /// Medoid indices in increasing order.
    pub medoids: Vec<usize>,
    /// Sum of distances to the assigned medoid.
    pub cost: f64,
    pub build_cost: f64,
    pub swaps: usize,
}

fn total_cost(dm: &DistanceMatrix, medoids: &[usize]) -> f64 {
    (0..dm.size())
        .map(|i| {
            medoids
                .iter()
                .map(|&m| dm.get(i, m))
                .fold(f64::INFINITY, f64::min)
        })
        .sum()
}

/// Partitions the objects of `dm` around `k` medoids.
///
/// BUILD adds, one at a time, the object that lowers the total cost most.
/// SWAP then applies the best medoid/non-medoid exchange until none lowers
/// the cost. All ties go to the lowest index.
pub fn pam_cluster(dm: &DistanceMatrix, k: usize) -> Result<PamResult> {
    let m = dm.size();
    if k == 0 || k > m {
        return Err(OtsError::InvalidParameter(format!(
            "number of clusters {k} must lie in 1..={m}"
        )));
    }
    let mut medoids: Vec<usize> = Vec::with_capacity(k);
    let mut is_medoid = vec![false; m];
    while medoids.len() < k {
        let mut best: Option<(usize, f64)> = None;
        for cand in (0..m).filter(|&c| !is_medoid[c]) {
            medoids.push(cand);
            let cost = total_cost(dm, &medoids);
            medoids.pop();
            if best.is_none_or(|(_, b)| cost < b) {
                best = Some((cand, cost));
            }
        }
        let (chosen, _) = best.expect("k <= m leaves a candidate");
        medoids.push(chosen);
        is_medoid[chosen] = true;
    }
    let build_cost = total_cost(dm, &medoids);

    let mut cost = build_cost;
    let mut swaps = 0;
    loop {
        let tol = 1e-12 * cost.abs().max(1.0);
        let mut best: Option<(usize, usize, f64)> = None;
        for slot in 0..k {
            for cand in (0..m).filter(|&c| !is_medoid[c]) {
                let old = medoids[slot];
                medoids[slot] = cand;
                let trial = total_cost(dm, &medoids);
                medoids[slot] = old;
                if trial < cost - tol && best.is_none_or(|(_, _, b)| trial < b) {
                    best = Some((slot, cand, trial));
                }
            }
        }
        let Some((slot, cand, trial)) = best else {
            break;
        };
        is_medoid[medoids[slot]] = false;
        is_medoid[cand] = true;
        medoids[slot] = cand;
        cost = trial;
        swaps += 1;
    }

    medoids.sort_unstable();
    let labels = (0..m)
        .map(|i| {
            let mut best = 0;
            for (c, &md) in medoids.iter().enumerate() {
                if dm.get(i, md) < dm.get(i, medoids[best]) {
                    best = c;
                }
            }
            best
        })
        .collect();
    Ok(PamResult {
        labels,
        cost: total_cost(dm, &medoids),
        medoids,
        build_cost,
        swaps,
    })
}
