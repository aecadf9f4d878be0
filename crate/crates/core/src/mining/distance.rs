//! Pairwise dissimilarities between series.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::features::{cumulative_feature_vector, pmf_feature_vector, FeatureMatrix};
use crate::error::{OtsError, Result};
use crate::series::OtsDataset;

/// Symmetric, zero-diagonal matrix stored as its strict upper triangle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceMatrix {
    size: usize,
    condensed: Vec<f64>,
}

impl DistanceMatrix {
    /// Evaluates `f(i, j)` for `i < j`.
    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut condensed = Vec::with_capacity(size * size.saturating_sub(1) / 2);
        for i in 0..size {
            for j in i + 1..size {
                let v = f(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(OtsError::InvalidDistance(format!(
                        "entry ({i}, {j}) is {v}"
                    )));
                }
                condensed.push(v);
            }
        }
        Ok(Self { size, condensed })
    }

    /// Checks symmetry, diagonal and sign of a full square matrix.
    pub fn from_full(m: &DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(OtsError::InvalidDistance("matrix is not square".into()));
        }
        for i in 0..m.nrows() {
            if m[(i, i)] != 0.0 {
                return Err(OtsError::InvalidDistance(format!(
                    "nonzero diagonal at {i}"
                )));
            }
            for j in i + 1..m.nrows() {
                let tol = 1e-12 * m[(i, j)].abs().max(1.0);
                if (m[(i, j)] - m[(j, i)]).abs() > tol {
                    return Err(OtsError::InvalidDistance(format!(
                        "asymmetric entries at ({i}, {j})"
                    )));
                }
            }
        }
        Self::from_fn(m.nrows(), |i, j| m[(i, j)])
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn condensed(&self) -> &[f64] {
        &self.condensed
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.size && j < self.size, "index out of bounds");
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Less => self.condensed[self.offset(i, j)],
            std::cmp::Ordering::Greater => self.condensed[self.offset(j, i)],
        }
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        i * self.size - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn to_full(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.size, self.size, |i, j| self.get(i, j))
    }

    /// `Σ_j d(i, j)` for every `i`.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| self.get(i, j)).sum())
            .collect()
    }

    /// Entry-wise square root.
    pub fn sqrt(&self) -> Self {
        Self {
            size: self.size,
            condensed: self.condensed.iter().map(|v| v.sqrt()).collect(),
        }
    }
}

/// Whether pairwise values are sums of squares or their square roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceScale {
    #[default]
    Squared,
    Root,
}

impl FromStr for DistanceScale {
    type Err = OtsError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "squared" => Ok(Self::Squared),
            "root" => Ok(Self::Root),
            other => Err(OtsError::InvalidParameter(format!(
                "unknown scale '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesMetric {
    /// Squared differences of cumulative probabilities.
    D1,
    /// Squared differences of plain probabilities.
    Pmf,
}

impl fmt::Display for SeriesMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::D1 => "d1",
            Self::Pmf => "pmf",
        })
    }
}

impl FromStr for SeriesMetric {
    type Err = OtsError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "d1" => Ok(Self::D1),
            "pmf" | "dpmf" => Ok(Self::Pmf),
            other => Err(OtsError::InvalidParameter(format!(
                "unknown metric '{other}'"
            ))),
        }
    }
}

fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn from_vectors(rows: &[Vec<f64>], scale: DistanceScale) -> Result<DistanceMatrix> {
    if rows.len() < 2 {
        return Err(OtsError::InvalidParameter(
            "a distance matrix needs at least 2 series".into(),
        ));
    }
    DistanceMatrix::from_fn(rows.len(), |i, j| {
        let sq = squared_euclidean(&rows[i], &rows[j]);
        match scale {
            DistanceScale::Squared => sq,
            DistanceScale::Root => sq.sqrt(),
        }
    })
}

/// `d̂_1` or `d̂_PMF` between every pair of series, with lag depth `lags`.
pub fn pairwise_distance_matrix(
    dataset: &OtsDataset,
    metric: SeriesMetric,
    lags: usize,
    scale: DistanceScale,
) -> Result<DistanceMatrix> {
    let rows = dataset
        .series()
        .par_iter()
        .map(|s| match metric {
            SeriesMetric::D1 => cumulative_feature_vector(s, lags),
            SeriesMetric::Pmf => pmf_feature_vector(s, lags),
        })
        .collect::<Result<Vec<_>>>()?;
    from_vectors(&rows, scale)
}

/// Euclidean distances between the rows of a feature matrix.
pub fn feature_distance_matrix(
    features: &FeatureMatrix,
    scale: DistanceScale,
) -> Result<DistanceMatrix> {
    from_vectors(features.rows(), scale)
}
