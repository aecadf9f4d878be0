//! Per-series feature vectors stacked into dataset-level matrices.

use rayon::prelude::*;
use serde::Serialize;

use crate::dependence::ordinal_cohens_kappa;
use crate::error::{OtsError, Result};
use crate::marginal::MarginalFeatureSet;
use crate::probs::{LaggedProbabilityProfile, ProbabilityProfile};
use crate::series::{OrdinalSeries, OtsDataset};
use crate::state::StateDistance;

pub const DEFAULT_LAG_DEPTH: usize = 2;

/// Names one column of a [`FeatureMatrix`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeatureDescriptor {
    pub name: String,
    /// `None` for marginal quantities.
    pub lag: Option<usize>,
    /// State indices the column refers to, empty for scalar features.
    pub index: Vec<usize>,
}

impl FeatureDescriptor {
    fn new(name: &str, lag: Option<usize>, index: Vec<usize>) -> Self {
        Self {
            name: name.to_string(),
            lag,
            index,
        }
    }

    /// Compact column header such as `f_joint[1](0,2)` or `kappa[2]`.
    pub fn column_name(&self) -> String {
        let mut out = self.name.clone();
        if let Some(lag) = self.lag {
            out.push_str(&format!("[{lag}]"));
        }
        if !self.index.is_empty() {
            let idx: Vec<String> = self.index.iter().map(usize::to_string).collect();
            out.push_str(&format!("({})", idx.join(",")));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureMatrix {
    rows: Vec<Vec<f64>>,
    schema: Vec<FeatureDescriptor>,
}

impl FeatureMatrix {
    pub fn new(rows: Vec<Vec<f64>>, schema: Vec<FeatureDescriptor>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != schema.len()) {
            return Err(OtsError::LengthMismatch {
                left: schema.len(),
                right: bad.len(),
            });
        }
        Ok(Self { rows, schema })
    }

    /// Rows of [`cumulative_feature_vector`].
    pub fn cumulative(dataset: &OtsDataset, lags: usize) -> Result<Self> {
        let rows = dataset
            .series()
            .par_iter()
            .map(|s| cumulative_feature_vector(s, lags))
            .collect::<Result<_>>()?;
        Self::new(
            rows,
            probability_schema(dataset.state_space().n(), lags, true),
        )
    }

    /// Rows of [`pmf_feature_vector`].
    pub fn pmf(dataset: &OtsDataset, lags: usize) -> Result<Self> {
        let rows = dataset
            .series()
            .par_iter()
            .map(|s| pmf_feature_vector(s, lags))
            .collect::<Result<_>>()?;
        Self::new(
            rows,
            probability_schema(dataset.state_space().n(), lags, false),
        )
    }

    /// Location, DIVC dispersion, asymmetry, skewness and `κ̂(1)`, `κ̂(2)`.
    pub fn summary(dataset: &OtsDataset, dist: &StateDistance) -> Result<Self> {
        let rows = dataset
            .series()
            .par_iter()
            .map(|s| summary_row(s, dist))
            .collect::<Result<_>>()?;
        let schema = vec![
            FeatureDescriptor::new("location", None, vec![]),
            FeatureDescriptor::new("dispersion", None, vec![]),
            FeatureDescriptor::new("asymmetry", None, vec![]),
            FeatureDescriptor::new("skewness", None, vec![]),
            FeatureDescriptor::new("kappa", Some(1), vec![]),
            FeatureDescriptor::new("kappa", Some(2), vec![]),
        ];
        Self::new(rows, schema)
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn schema(&self) -> &[FeatureDescriptor] {
        &self.schema
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.schema.len()
    }

    pub fn column_names(&self) -> Vec<String> {
        self.schema
            .iter()
            .map(FeatureDescriptor::column_name)
            .collect()
    }
}

fn summary_row(series: &OrdinalSeries, dist: &StateDistance) -> Result<Vec<f64>> {
    let set = MarginalFeatureSet::compute(series, dist, false)?;
    Ok(vec![
        set.location_standard as f64,
        set.dispersion_2,
        set.asymmetry,
        set.skewness,
        ordinal_cohens_kappa(series, dist, 1)?,
        ordinal_cohens_kappa(series, dist, 2)?,
    ])
}

fn probability_schema(n: usize, lags: usize, cumulative: bool) -> Vec<FeatureDescriptor> {
    let (k, marginal, joint) = if cumulative {
        (n, "f", "f_joint")
    } else {
        (n + 1, "p", "p_joint")
    };
    let mut schema: Vec<_> = (0..k)
        .map(|i| FeatureDescriptor::new(marginal, None, vec![i]))
        .collect();
    for lag in 1..=lags {
        for i in 0..k {
            for j in 0..k {
                schema.push(FeatureDescriptor::new(joint, Some(lag), vec![i, j]));
            }
        }
    }
    schema
}

/// `(f̂_0..f̂_{n-1}, f̂_ij(1), ..., f̂_ij(L))` with joint blocks in row-major order.
///
/// Length `n + L n²`; the squared Euclidean distance between two such
/// vectors is the cumulative dissimilarity `d̂_1`.
pub fn cumulative_feature_vector(series: &OrdinalSeries, lags: usize) -> Result<Vec<f64>> {
    let mut out = ProbabilityProfile::estimate(series).f_hat;
    for lag in 1..=lags {
        let joint = LaggedProbabilityProfile::estimate(series, lag)?.f_joint;
        out.extend(joint.transpose().iter());
    }
    Ok(out)
}

/// `(p̂_0..p̂_n, p̂_ij(1), ..., p̂_ij(L))`, length `(n+1) + L (n+1)²`.
pub fn pmf_feature_vector(series: &OrdinalSeries, lags: usize) -> Result<Vec<f64>> {
    let mut out = ProbabilityProfile::estimate(series).p_hat;
    for lag in 1..=lags {
        let joint = LaggedProbabilityProfile::estimate(series, lag)?.p_joint;
        out.extend(joint.transpose().iter());
    }
    Ok(out)
}
