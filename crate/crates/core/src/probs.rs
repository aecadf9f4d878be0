//! Plug-in estimates of marginal, lagged joint, and cumulative probabilities.
//!
//! Joint matrices are oriented with the first index on the earlier
//! observation: entry `(i, j)` counts pairs `(C_k = i, C_{k+l} = j)`.
//! Marginals use all `T` observations, joints the `T - l` available pairs.

use nalgebra::DMatrix;

use crate::error::{OtsError, Result};
use crate::series::OrdinalSeries;

/// Estimated marginal probabilities and their cumulative version.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityProfile {
    /// `p̂_0, ..., p̂_n`.
    pub p_hat: Vec<f64>,
    /// `f̂_0, ..., f̂_{n-1}`; `f̂_n = 1` is omitted.
    pub f_hat: Vec<f64>,
}

impl ProbabilityProfile {
    pub fn estimate(series: &OrdinalSeries) -> Self {
        let counts = state_counts(series);
        let t = series.len() as f64;
        let p_hat = counts.iter().map(|&c| c as f64 / t).collect();
        let mut running = 0usize;
        let f_hat = counts[..series.n()]
            .iter()
            .map(|&c| {
                running += c;
                running as f64 / t
            })
            .collect();
        Self { p_hat, f_hat }
    }
}

/// Estimated lag-`l` joint probabilities and their cumulative version.
#[derive(Debug, Clone, PartialEq)]
pub struct LaggedProbabilityProfile {
    pub lag: usize,
    /// `(n+1) x (n+1)` matrix of `p̂_ij(l)`.
    pub p_joint: DMatrix<f64>,
    /// `n x n` matrix of `f̂_ij(l)`.
    pub f_joint: DMatrix<f64>,
}

impl LaggedProbabilityProfile {
    pub fn estimate(series: &OrdinalSeries, lag: usize) -> Result<Self> {
        let counts = pair_counts(series, lag)?;
        let pairs = (series.len() - lag) as f64;
        let n = series.n();
        let p_joint = counts.map(|c| c as f64 / pairs);
        // cumulative counts over the upper-left block
        let mut cum = DMatrix::<usize>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut v = counts[(i, j)];
                if i > 0 {
                    v += cum[(i - 1, j)];
                }
                if j > 0 {
                    v += cum[(i, j - 1)];
                }
                if i > 0 && j > 0 {
                    v -= cum[(i - 1, j - 1)];
                }
                cum[(i, j)] = v;
            }
        }
        let f_joint = cum.map(|c| c as f64 / pairs);
        Ok(Self {
            lag,
            p_joint,
            f_joint,
        })
    }
}

fn state_counts(series: &OrdinalSeries) -> Vec<usize> {
    let mut counts = vec![0usize; series.n() + 1];
    for &c in series.codes() {
        counts[c] += 1;
    }
    counts
}

fn pair_counts(series: &OrdinalSeries, lag: usize) -> Result<DMatrix<usize>> {
    if lag == 0 {
        return Err(OtsError::InvalidLag {
            lag,
            len: series.len(),
        });
    }
    series.check_lag(lag)?;
    let size = series.n() + 1;
    let codes = series.codes();
    let mut counts = DMatrix::<usize>::zeros(size, size);
    for (&earlier, &later) in codes.iter().zip(&codes[lag..]) {
        counts[(earlier, later)] += 1;
    }
    Ok(counts)
}

/// `p̂_i`, the relative frequency of each state.
pub fn marginal_probabilities(series: &OrdinalSeries) -> Vec<f64> {
    ProbabilityProfile::estimate(series).p_hat
}

/// `p̂_ij(l)` over the `T - l` pairs; requires `1 <= l <= T - 1`.
pub fn joint_probabilities(series: &OrdinalSeries, lag: usize) -> Result<DMatrix<f64>> {
    Ok(LaggedProbabilityProfile::estimate(series, lag)?.p_joint)
}

/// `f̂_i` for `i = 0..n-1`.
pub fn c_marginal_probabilities(series: &OrdinalSeries) -> Vec<f64> {
    ProbabilityProfile::estimate(series).f_hat
}

/// `f̂_ij(l)` for `i, j = 0..n-1`; requires `1 <= l <= T - 1`.
pub fn c_joint_probabilities(series: &OrdinalSeries, lag: usize) -> Result<DMatrix<f64>> {
    Ok(LaggedProbabilityProfile::estimate(series, lag)?.f_joint)
}
